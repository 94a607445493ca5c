#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qrs::cli {

// Flat key=value configuration. Lines starting with '#' are comments.
struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& k) const { return values.count(k) > 0; }
    std::string str(const std::string& k) const;
    long long integer(const std::string& k) const;
    double real(const std::string& k) const;
    bool flag(const std::string& k) const;
    std::vector<double> reals(const std::string& k) const;  // comma list; a..b ranges and p/q fractions allowed
    std::vector<long long> integers(const std::string& k) const;

    std::string canonical() const;  // sorted key=value lines
    std::uint64_t hash() const;     // FNV-1a of canonical()
};

Config parse_config_text(const std::string& text);
Config load_config(const std::filesystem::path& path);

using Cell = std::variant<long long, double, std::string>;

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct RunResult {
    std::vector<ResultTable> tables;
    nlohmann::ordered_json summary;
};

// Fills defaults, rejects unknown keys, runs the subcommand.
RunResult run(const std::string& subcommand, Config cfg);
std::vector<std::string> subcommands();

std::string format_csv(const ResultTable& t, const Config& cfg, const std::string& subcommand);
// writes <out>/<subcommand>[_<target>]_<table>.csv and a .json summary; returns the written paths
std::vector<std::filesystem::path> write_outputs(const RunResult& r, const Config& cfg, const std::string& subcommand,
                                                 const std::filesystem::path& out_dir);
// recomputes the embedded config hash of a written CSV
bool verify_csv(const std::filesystem::path& csv);

std::filesystem::path default_output_dir();  // $QRS_OUTPUT_DIR or "."

int main_entry(int argc, char** argv);

}  // namespace qrs::cli
