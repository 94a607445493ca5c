#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "qrs/core.hpp"

using namespace qrs;
using namespace qrs::cli;

namespace {

Config cfg(std::map<std::string, std::string> kv) { return Config{std::move(kv)}; }

}  // namespace

TEST(Config, ParsesKeyValueText) {
    auto c = parse_config_text("# comment\nkind = qmc\n beta=2.5 \n\nlist = 1,2, 1/4\nrange = 6..8\n");
    EXPECT_EQ(c.str("kind"), "qmc");
    EXPECT_DOUBLE_EQ(c.real("beta"), 2.5);
    EXPECT_EQ(c.reals("list"), (std::vector<double>{1, 2, 0.25}));
    EXPECT_EQ(c.integers("range"), (std::vector<long long>{6, 7, 8}));
    EXPECT_THROW(parse_config_text("novalue\n"), ConfigError);
}

TEST(Config, TypedGettersReject) {
    auto c = cfg({{"a", "x"}, {"b", "1.5"}, {"f", "maybe"}});
    EXPECT_THROW(c.real("a"), ConfigError);
    EXPECT_THROW(c.integer("b"), ConfigError);
    EXPECT_THROW(c.flag("f"), ConfigError);
    EXPECT_THROW(c.str("missing"), ConfigError);
}

TEST(Config, HashIsOrderIndependentAndSensitive) {
    auto a = parse_config_text("x=1\ny=2\n"), b = parse_config_text("y=2\nx=1\n"), c = parse_config_text("x=1\ny=3\n");
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
}

TEST(Run, EmptyCircuitSamplesAreZero) {
    auto r = run("sample", cfg({{"circuit", "empty"}, {"n", "3"}, {"samples", "10"}}));
    ASSERT_EQ(r.tables.size(), 1u);
    for (const auto& row : r.tables[0].rows) EXPECT_EQ(std::get<long long>(row[1]), 0);
}

TEST(Run, ErrorsMapToTaxonomy) {
    EXPECT_THROW(run("nope", {}), ConfigError);
    EXPECT_THROW(run("sample", cfg({{"bogus", "1"}})), ConfigError);
    EXPECT_THROW(run("sample", cfg({{"kind", "qmc"}})), ConfigError);
    EXPECT_THROW(run("reproduce", cfg({{"target", "fig9"}})), ConfigError);
    EXPECT_THROW(run("sample", cfg({{"n", "40"}})), CapExceeded);
}

TEST(Run, EverySubcommandIsDeterministic) {
    const std::map<std::string, Config> small = {
        {"sample", cfg({{"n", "4"}, {"samples", "20"}})},
        {"analyze", cfg({{"circuit", "cluster"}})},
        {"verify", cfg({{"n", "5"}, {"samples", "200"}})},
        {"certify", cfg({{"protocol", "rapid"}, {"trials", "3"}})},
        {"qmc", cfg({{"mode", "both"}, {"sweeps", "500"}, {"burn_in", "50"}})},
        {"ease", cfg({{"instances", "2"}, {"max_iters", "100"}, {"restarts", "1"}})},
        {"gadget", cfg({})},
        {"reproduce", cfg({{"target", "table7.5"}})},
    };
    for (const auto& [name, c] : small) {
        auto a = run(name, c), b = run(name, c);
        ASSERT_EQ(a.tables.size(), b.tables.size()) << name;
        for (std::size_t i = 0; i < a.tables.size(); ++i)
            EXPECT_EQ(format_csv(a.tables[i], c, name), format_csv(b.tables[i], c, name)) << name;
        EXPECT_EQ(a.summary.dump(), b.summary.dump()) << name;
    }
}

TEST(Output, CsvCarriesVerifiableHash) {
    auto dir = std::filesystem::temp_directory_path() / "qrs_cli_test";
    std::filesystem::remove_all(dir);
    auto c = cfg({{"n", "3"}, {"samples", "5"}, {"seed", "9"}});
    auto paths = write_outputs(run("sample", c), c, "sample", dir);
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_TRUE(verify_csv(paths[0]));
    // tamper with a config line
    std::ifstream in(paths[0]);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    text.replace(text.find("# config: seed=9"), 16, "# config: seed=8");
    std::ofstream(paths[0], std::ios::binary) << text;
    EXPECT_FALSE(verify_csv(paths[0]));
    std::filesystem::remove_all(dir);
}

TEST(Output, CsvQuotingAndNumberFormat) {
    ResultTable t{"t", {"a", "b"}, {}};
    t.add({0.1, std::string("x,\"y\"")});
    auto s = format_csv(t, {}, "sample");
    EXPECT_NE(s.find("0.10000000000000001,\"x,\"\"y\"\"\"\r\n"), std::string::npos);
    EXPECT_THROW(t.add({1.0}), NumericalError);
}
