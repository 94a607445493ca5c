#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrs/certification.hpp"
#include "qrs/experiments.hpp"
#include "qrs/random_matrix.hpp"
#include "qrs/samplers.hpp"
#include "qrs/verification.hpp"

namespace qrs::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& tok) {
    auto slash = tok.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            double a = std::stod(tok.substr(0, slash)), b = std::stod(tok.substr(slash + 1));
            if (b == 0) throw ConfigError("division by zero in '" + tok + "'");
            return a / b;
        }
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw ConfigError("not a number: '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("not a number: '" + tok + "'");
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string Config::str(const std::string& k) const {
    auto it = values.find(k);
    if (it == values.end()) throw ConfigError("missing config key '" + k + "'");
    return it->second;
}

long long Config::integer(const std::string& k) const {
    double v = parse_number(str(k));
    if (v != std::floor(v)) throw ConfigError("key '" + k + "' must be an integer");
    return (long long)v;
}

double Config::real(const std::string& k) const { return parse_number(str(k)); }

bool Config::flag(const std::string& k) const {
    auto v = str(k);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ConfigError("key '" + k + "' must be a boolean");
}

std::vector<double> Config::reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& tok : split(str(k), ',')) {
        auto dots = tok.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_number(tok));
            continue;
        }
        // a..b or a..b:step
        std::string rest = tok.substr(dots + 2);
        double step = 1;
        if (auto c = rest.find(':'); c != std::string::npos) {
            step = parse_number(rest.substr(c + 1));
            rest = rest.substr(0, c);
        }
        double a = parse_number(tok.substr(0, dots)), b = parse_number(rest);
        if (!(step > 0)) throw ConfigError("range step must be positive in '" + k + "'");
        for (int i = 0; a + i * step <= b + 1e-9; ++i) out.push_back(a + i * step);
    }
    if (out.empty()) throw ConfigError("key '" + k + "' is an empty list");
    return out;
}

std::vector<long long> Config::integers(const std::string& k) const {
    std::vector<long long> out;
    for (double v : reals(k)) {
        if (v != std::floor(v)) throw ConfigError("key '" + k + "' must list integers");
        out.push_back((long long)v);
    }
    return out;
}

std::string Config::canonical() const {
    std::string s;
    for (const auto& [k, v] : values) s += k + "=" + v + "\n";
    return s;
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Config parse_config_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(no) + ": expected key = value");
        auto k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k.empty()) throw ConfigError("config line " + std::to_string(no) + ": empty key");
        c.values[k] = v;
    }
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void ResultTable::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw NumericalError("result table '" + name + "': row width mismatch");
    rows.push_back(std::move(row));
}

namespace {

using Defaults = std::map<std::string, std::string>;
using Runner = std::function<RunResult(const Config&)>;

struct Command {
    Defaults defaults;
    Runner runner;
};

// Evaluates f(0..count-1) on worker threads; results come back in index order, so
// output does not depend on scheduling.
template <class F>
auto parallel_map(std::size_t count, F f) -> std::vector<decltype(f(std::size_t{0}))> {
    std::vector<decltype(f(std::size_t{0}))> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < count;) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

ResultTable table(std::string name, std::vector<std::string> cols) {
    ResultTable t;
    t.name = std::move(name);
    t.columns = std::move(cols);
    return t;
}

std::string bits(std::uint64_t x, int n) {
    std::string s(n, '0');
    for (int q = 0; q < n; ++q)
        if (bit(x, q)) s[q] = '1';
    return s;
}

// circuit keys shared by sample / analyze / verify
const Defaults kCircuitKeys = {{"circuit", "iqp"}, {"n", "6"},   {"depth", "8"},
                               {"k", "1"},         {"reps", "1"}, {"rows", "2"},
                               {"cols", "3"}};

Circuit make_circuit(const Config& c, Rng& rng) {
    const auto kind = c.str("circuit");
    const int n = int(c.integer("n"));
    if (kind == "empty") return Circuit(n);
    if (kind == "iqp") {
        IQPWeights w;
        w.n = n;
        w.W = RMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) w.W(i, j) = w.W(j, i) = kPi / 8 * double(rng.below(16));
        return iqp_circuit(w);
    }
    if (kind == "cluster") return cluster_circuit(random_cluster_scheme(int(c.integer("rows")), int(c.integer("cols")), rng));
    if (kind == "logical") return cluster_logical_circuit(n, n, random_angles(n * n, cluster_angle_set(), rng));
    if (kind == "random") return random_parallel_circuit(n, int(c.integer("depth")), rng);
    if (kind == "iontrap") {
        auto w = iontrap_weights(n, int(c.integer("k")), int(c.integer("reps")), rng);
        return iqp_circuit(w);
    }
    throw ConfigError("unknown circuit kind '" + kind + "'");
}

Defaults with(Defaults base, const Defaults& extra) {
    for (const auto& [k, v] : extra) base[k] = v;
    return base;
}

RunResult run_sample(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    Rng crng = rng.split(0), srng = rng.split(1);
    auto circ = make_circuit(c, crng);
    auto p = born_distribution(simulate(circ));
    auto s = inverse_cdf_sample(p, std::size_t(c.integer("samples")), srng);
    RunResult r;
    auto t = table("samples", {"index", "outcome", "bits"});
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        t.add({(long long)i, (long long)s.samples[i], bits(s.samples[i], circ.n_qubits)});
    r.tables.push_back(std::move(t));
    r.summary["qubits"] = circ.n_qubits;
    r.summary["gates"] = circ.gates.size();
    r.summary["samples"] = s.samples.size();
    return r;
}

RunResult run_analyze(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    Rng crng = rng.split(0);
    auto circ = make_circuit(c, crng);
    auto p = born_distribution(simulate(circ));
    const int n = circ.n_qubits;
    RunResult r;
    auto t = table("metrics", {"metric", "value"});
    auto put = [&](const std::string& k, double v) {
        t.add({k, v});
        r.summary[k] = v;
    };
    const int bins = default_pt_bins(n);
    if (bins >= 2) put("pt_tv", tv_to_porter_thomas(p, bins));
    put("anticoncentration", anticonc_fraction(p, c.real("alpha")));
    put("shannon_entropy", shannon_entropy(p));
    put("renyi2_entropy", renyi_entropy(p, 2.0));
    put("min_entropy", min_entropy(p));
    double m2 = 0;
    for (double x : p) m2 += x * x;
    put("collision_dimension_ratio", m2 * double(p.size()));
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_verify(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    Rng crng = rng.split(0), srng = rng.split(1);
    auto circ = make_circuit(c, crng);
    auto target = born_distribution(simulate(circ));
    const auto src = c.str("source");
    Probs q;
    if (src == "ideal") q = target;
    else if (src == "uniform") q.assign(target.size(), 1.0 / double(target.size()));
    else throw ConfigError("source must be ideal or uniform");
    auto s = inverse_cdf_sample(q, std::size_t(c.integer("samples")), srng);
    const double eps = c.real("eps");
    VVConfig vc;
    vc.constant = c.real("vv_constant");
    auto vv = vv_identity_test(s, target, eps, vc);
    RunResult r;
    auto t = table("statistics", {"statistic", "value"});
    auto put = [&](const std::string& k, double v) {
        t.add({k, v});
        r.summary[k] = v;
    };
    put("xeb", xeb_fidelity(s, target));
    put("ce_difference", ce_difference(s, target));
    put("hog", hog_fidelity(s, target));
    const int bins = std::max(2, default_pt_bins(circ.n_qubits));
    put("bog", bog_distance(s, target, bins));
    put("vv_statistic", vv.statistic);
    put("vv_threshold", vv.threshold);
    put("vv_accept", vv.accept ? 1.0 : 0.0);
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_certify(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    const int rows = int(c.integer("rows")), cols = int(c.integer("cols"));
    ClusterScheme scheme{rows, cols, std::vector<double>(rows * cols, 0.0)};
    if (c.flag("random_angles")) {
        Rng ar = rng.split(0);
        scheme.beta = random_angles(rows * cols, cluster_angle_set(), ar);
    }
    auto psi = scheme_state(scheme);
    auto rho = depolarize(pure_density(psi), c.real("depolarizing"));
    auto prep = NoisyPreparation::from_density(rho);
    const double F = fidelity_pure(psi, rho);
    const int trials = int(c.integer("trials"));
    const auto proto = c.str("protocol");
    RunResult r;
    r.summary["exact_fidelity"] = F;
    if (proto == "witness") {
        auto H = beta_parent(scheme);
        auto b = fidelity_bounds(H, prep);
        r.summary["f_min"] = b.f_min;
        r.summary["f_max"] = b.f_max;
        auto t = table("trials", {"trial", "accept", "witness", "threshold", "m", "delta"});
        int acc = 0;
        for (int i = 0; i < trials; ++i) {
            Rng tr = rng.split(100 + i);
            auto v = witness_test(prep, H, c.real("f_t"), c.real("alpha"), c.real("eps"), tr);
            acc += v.accept;
            t.add({(long long)i, (long long)v.accept, v.witness, v.threshold, (long long)v.m, v.delta});
        }
        r.summary["accept_rate"] = double(acc) / trials;
        r.tables.push_back(std::move(t));
    } else if (proto == "rapid") {
        auto t = table("trials", {"trial", "estimate", "abs_error"});
        const double eps = c.real("rapid_eps"), delta = c.real("delta");
        int within = 0;
        for (int i = 0; i < trials; ++i) {
            Rng tr = rng.split(100 + i);
            double e = rapid_fidelity(prep, scheme, eps, delta, tr);
            within += std::fabs(e - F) <= eps;
            t.add({(long long)i, e, std::fabs(e - F)});
        }
        r.summary["rounds"] = rapid_fidelity_rounds(eps, delta);
        r.summary["within_eps_rate"] = double(within) / trials;
        r.tables.push_back(std::move(t));
    } else if (proto == "plm") {
        std::vector<PauliProduct> gens;
        for (int k = 0; k < scheme.size(); ++k) gens.push_back(stabilizer_product(scheme, 1ULL << k));
        auto strat = generator_strategy(gens);
        auto t = table("trials", {"trial", "accept", "rounds_run"});
        const auto m = std::uint64_t(c.integer("plm_rounds"));
        int acc = 0;
        double gap = 0;
        for (int i = 0; i < trials; ++i) {
            Rng tr = rng.split(100 + i);
            auto v = plm_test(prep, strat, m, tr);
            gap = v.gap;
            acc += v.accept;
            t.add({(long long)i, (long long)v.accept, (long long)v.rounds_run});
        }
        r.summary["gap"] = gap;
        r.summary["accept_rate"] = double(acc) / trials;
        r.tables.push_back(std::move(t));
    } else {
        throw ConfigError("protocol must be witness, rapid or plm");
    }
    return r;
}

RealHamiltonian qmc_model(const Config& c, Rng& rng) {
    const auto model = c.str("model");
    const int n = int(c.integer("n"));
    if (model == "example10_1") return example_10_1(n);
    if (model == "random") {
        auto H = chain_hamiltonian(gaussian_symmetric(4, rng), 2, n, false);
        if (c.real("alpha_scale") >= 0) H = h_alpha(H, c.real("alpha_scale"));
        return H;
    }
    if (model == "ising") {
        TwoLocalSpec s;
        s.n = n;
        for (int i = 0; i + 1 < n; ++i) {
            TwoLocalEdge e;
            e.i = i;
            e.j = i + 1;
            e.c = 1.0;
            s.edges.push_back(e);
        }
        s.alpha.assign(n, -c.real("field"));
        return dense_hamiltonian(s);
    }
    throw ConfigError("model must be example10_1, random or ising");
}

RunResult run_qmc(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    Rng mr = rng.split(0), cr = rng.split(1);
    auto H = qmc_model(c, mr);
    const double beta = c.real("beta");
    const int m = int(c.integer("m"));
    RunResult r;
    auto t = table("sign", {"quantity", "value", "stderr"});
    double exact = average_sign_exact(H, beta, m);
    t.add({std::string("sign_exact"), exact, 0.0});
    t.add({std::string("nu1"), nonstoq(H, 1.0), 0.0});
    r.summary["sign_exact"] = exact;
    const auto mode = c.str("mode");
    if (mode == "mc" || mode == "both") {
        ChainConfig cc;
        cc.sweeps = std::uint64_t(c.integer("sweeps"));
        cc.burn_in = std::uint64_t(c.integer("burn_in"));
        auto e = average_sign_mc(H, beta, m, cc, cr);
        t.add({std::string("sign_mc"), e.value, e.stderr_});
        r.summary["sign_mc"] = e.value;
        r.summary["sign_mc_stderr"] = e.stderr_;
    } else if (mode != "exact") {
        throw ConfigError("mode must be exact, mc or both");
    }
    if (exact > 0) {
        auto need = sample_requirement(std::min(exact, 1.0), c.real("eps"));
        t.add({std::string("samples_required"), double(need), 0.0});
    }
    r.tables.push_back(std::move(t));
    return r;
}

OptimizerConfig optimizer_from(const Config& c, OptimizerConfig base) {
    if (c.str("alpha") != "auto") base.alpha = c.real("alpha");
    if (c.str("restarts") != "auto") base.restarts = int(c.integer("restarts"));
    if (c.str("max_iters") != "auto") base.max_iters = int(c.integer("max_iters"));
    return base;
}

RunResult run_ease(const Config& c) {
    Rng rng(std::uint64_t(c.integer("seed")));
    const auto model = c.str("model");
    RunResult r;
    if (model == "hidden") {
        const int d = int(c.integer("d"));
        auto cfg = optimizer_from(c, hidden_optimizer());
        auto t = table("instances", {"instance", "nu_before", "nu_after", "ratio"});
        int rec = 0;
        const int inst = int(c.integer("instances"));
        for (int i = 0; i < inst; ++i) {
            Rng ir = rng.split(i);
            auto h = hidden_stoquastic_term(d, ir);
            auto p = ease_term(h, cfg, ir);
            rec += p.nu_after < 1e-6;
            t.add({(long long)i, p.nu_before, p.nu_after, p.nu_before / std::max(p.nu_after, 1e-300)});
        }
        r.summary["recovered"] = rec;
        r.summary["instances"] = inst;
        r.tables.push_back(std::move(t));
        return r;
    }
    if (model != "ladder" && model != "jmodel") throw ConfigError("model must be hidden, ladder or jmodel");
    const bool ladder = model == "ladder";
    auto cfg = optimizer_from(c, ladder ? ladder_optimizer() : jmodel_optimizer());
    auto xs = c.reals("grid_x"), ys = c.reals("grid_y");
    auto t = table("grid", {ladder ? "jx_over_jpar" : "j2_over_j", ladder ? "jperp_over_jpar" : "j3_over_j",
                            "nu_before", "nu_after", "improvement"});
    std::vector<std::pair<double, double>> pts;
    for (double x : xs)
        for (double y : ys) pts.emplace_back(x, y);
    const bool half = c.flag("half_spin");
    auto res = parallel_map(pts.size(), [&](std::size_t i) {
        Rng pr = rng.split(i);
        auto [x, y] = pts[i];
        auto h = ladder ? ladder_term(1.0, y, x, half) : jmodel_term(1.0, 1.0, x, y, half);
        return ease_term(h, cfg, pr);
    });
    for (std::size_t i = 0; i < pts.size(); ++i)
        t.add({pts[i].first, pts[i].second, res[i].nu_before, res[i].nu_after, res[i].ratio()});
    r.tables.push_back(std::move(t));
    return r;
}

Graph parse_graph(int v, const std::string& spec) {
    Graph g;
    g.v = v;
    for (const auto& e : split(spec, ',')) {
        auto dash = e.find('-');
        if (dash == std::string::npos) throw ConfigError("edge '" + e + "' must look like i-j");
        g.edges.emplace_back(int(parse_number(e.substr(0, dash))), int(parse_number(e.substr(dash + 1))));
    }
    g.validate();
    return g;
}

std::string graph_string(const Graph& g) {
    std::string s;
    for (auto [a, b] : g.edges) s += (s.empty() ? "" : " ") + std::to_string(a) + "-" + std::to_string(b);
    return s.empty() ? "none" : s;
}

RunResult run_gadget(const Config& c) {
    const int v = int(c.integer("vertices"));
    const auto mode = c.str("mode") == "orthogonal" ? GadgetMode::Orthogonal : GadgetMode::Clifford;
    if (c.str("mode") != "orthogonal" && c.str("mode") != "clifford") throw ConfigError("mode: clifford|orthogonal");
    std::vector<Graph> graphs = c.flag("all") ? all_graphs(v) : std::vector<Graph>{parse_graph(v, c.str("edges"))};
    const int full_cap = int(c.integer("full_max_qubits"));
    RunResult r;
    auto t = table("graphs", {"graph", "edges", "qubits", "C", "maxcut", "zflip_optimum", "full_optimum"});
    int agree = 0, full_never_better = 0, full_checked = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        auto inst = maxcut_gadget(graphs[i], mode);
        const int mc = maxcut(graphs[i]);
        auto z = brute_force_clifford_optimum(inst, CliffordSearch::ZFlip);
        double full = std::nan("");
        if (inst.spec.n <= full_cap) {
            full = brute_force_clifford_optimum(inst, CliffordSearch::Full).nu1;
            ++full_checked;
            full_never_better += full >= z.nu1 - 1e-9;
        }
        agree += std::fabs(z.nu1 - double(graphs[i].edges.size() - mc)) < 1e-9;
        t.add({(long long)i, graph_string(graphs[i]), (long long)inst.spec.n, inst.C, (long long)mc, z.nu1,
               std::isnan(full) ? Cell(std::string("skipped")) : Cell(full)});
    }
    r.summary["graphs"] = graphs.size();
    r.summary["zflip_matches_cut"] = agree;
    r.summary["full_checked"] = full_checked;
    r.summary["full_never_better"] = full_never_better;
    r.tables.push_back(std::move(t));
    return r;
}

RunResult reproduce(const Config& c) {
    const auto target = c.str("target");
    Rng rng(std::uint64_t(c.integer("seed")));
    RunResult r;
    if (target == "fig4.4" || target == "fig4.5") {
        const bool gamma = target == "fig4.4";
        auto t = table(gamma ? "gamma" : "tv", {"n", "instance", gamma ? "gamma" : "tv_porter_thomas"});
        for (auto n : c.integers("n")) {
            Rng nr = rng.split(std::uint64_t(n));
            auto vals = gamma ? anticoncentration_ensemble(int(n), int(c.integer("instances")), nr)
                              : porter_thomas_ensemble(int(n), int(c.integer("instances")), nr);
            for (std::size_t i = 0; i < vals.size(); ++i) t.add({n, (long long)i, vals[i]});
            r.summary["median_n" + std::to_string(n)] = median(vals);
        }
        if (gamma) r.summary["reference"] = std::exp(-1.0);
        r.tables.push_back(std::move(t));
    } else if (target == "fig10.1") {
        auto pts = sign_vs_nonstoquasticity(int(c.integer("n")), int(c.integer("instances")), c.real("alpha_max"),
                                            int(c.integer("grid")), c.real("beta"), int(c.integer("m")), rng);
        auto t = table("sign", {"instance", "alpha", "d_nu1", "sign", "inv_sign"});
        for (const auto& p : pts) t.add({(long long)p.instance, p.alpha, p.d_nu1, p.sign, 1.0 / p.sign});
        auto tr = sign_trend(pts);
        r.summary["pooled_slope"] = tr.pooled.slope;
        r.summary["pooled_r2"] = tr.pooled.r2;
        r.summary["median_slope"] = tr.median_fit.slope;
        r.summary["median_r2"] = tr.median_fit.r2;
        r.tables.push_back(std::move(t));
    } else if (target == "fig11.2a") {
        auto cfg = optimizer_from(c, hidden_optimizer());
        auto t = table("recovery", {"d", "instance", "nu_before", "nu_after", "relative"});
        for (auto d : c.integers("d")) {
            const int inst = int(c.integer("instances"));
            auto res = parallel_map(std::size_t(inst), [&](std::size_t i) {
                Rng ir = rng.split(std::uint64_t(d) * 100000 + i);
                auto h = hidden_stoquastic_term(int(d), ir);
                return ease_term(h, cfg, ir);
            });
            int rec = 0;
            for (int i = 0; i < inst; ++i) {
                rec += res[i].nu_after < 1e-6;
                t.add({d, (long long)i, res[i].nu_before, res[i].nu_after, res[i].nu_after / res[i].nu_before});
            }
            r.summary["recovered_d" + std::to_string(d)] = rec;
        }
        r.tables.push_back(std::move(t));
    } else if (target == "fig11.4") {
        auto cfg = optimizer_from(c, ladder_optimizer());
        const int sites = int(c.integer("sites"));
        const double beta = c.real("beta");
        const int m = int(c.integer("m"));
        auto t = table("ladder", {"jx_over_jpar", "jperp_over_jpar", "nu_before", "nu_after", "nu_improvement",
                                  "log_inv_sign_before", "log_inv_sign_after"});
        std::vector<std::pair<double, double>> pts;
        for (double x : c.reals("grid_x"))
            for (double y : c.reals("grid_y")) pts.emplace_back(x, y);
        const bool half = c.flag("half_spin");
        auto res = parallel_map(pts.size(), [&](std::size_t i) {
            Rng pr = rng.split(i);
            auto h = ladder_term(1.0, pts[i].second, pts[i].first, half);
            RMat O;
            auto p = ease_term(h, cfg, pr, &O);
            return std::make_pair(p, sign_after_easing(h, O, sites, beta, m));
        });
        for (std::size_t i = 0; i < pts.size(); ++i) {
            auto& [p, sg] = res[i];
            t.add({pts[i].first, pts[i].second, p.nu_before, p.nu_after, p.ratio(), -std::log(sg.before),
                   -std::log(sg.after)});
        }
        r.tables.push_back(std::move(t));
    } else if (target == "table7.5") {
        auto t = table("table", {"eps_tv", "threshold_fidelity", "estimation_error", "m_opt"});
        const double alpha = c.real("alpha");
        for (double e : c.reals("eps_tv")) {
            double ft = threshold_fidelity(e);
            double est = (1 - ft) / c.real("error_divisor");
            t.add({e, ft, est, (long long)rapid_fidelity_rounds(est, alpha)});
        }
        r.tables.push_back(std::move(t));
    } else {
        throw ConfigError("unknown reproduce target '" + target + "'");
    }
    return r;
}

const std::map<std::string, Defaults>& reproduce_defaults() {
    static const std::map<std::string, Defaults> d = {
        {"fig4.4", {{"n", "6..12"}, {"instances", "100"}}},
        {"fig4.5", {{"n", "8,10,12"}, {"instances", "100"}}},
        {"fig10.1", {{"n", "5"}, {"instances", "100"}, {"alpha_max", "400"}, {"grid", "10"}, {"beta", "1"}, {"m", "100"}}},
        {"fig11.2a",
         {{"d", "2,3,4"}, {"instances", "100"}, {"alpha", "auto"}, {"restarts", "auto"}, {"max_iters", "auto"}}},
        {"fig11.4",
         {{"grid_x", "0.25,0.5,0.75,1"},
          {"grid_y", "0.2,0.8,1.4,2"},
          {"sites", "4"},
          {"beta", "1"},
          {"m", "100"},
          {"half_spin", "1"},
          {"alpha", "auto"},
          {"restarts", "auto"},
          {"max_iters", "auto"}}},
        {"table7.5", {{"eps_tv", "1/22,1/5"}, {"alpha", "0.01"}, {"error_divisor", "5"}}},
    };
    return d;
}

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> cmds = {
        {"sample", {with(kCircuitKeys, {{"samples", "100"}}), run_sample}},
        {"analyze", {with(kCircuitKeys, {{"alpha", "1"}}), run_analyze}},
        {"verify",
         {with(kCircuitKeys, {{"samples", "1000"}, {"source", "ideal"}, {"eps", "0.2"}, {"vv_constant", "4"}}),
          run_verify}},
        {"certify",
         {{{"protocol", "witness"},
           {"rows", "2"},
           {"cols", "2"},
           {"random_angles", "1"},
           {"depolarizing", "0"},
           {"f_t", "0.9"},
           {"alpha", "0.05"},
           {"eps", "0.01"},
           {"rapid_eps", "0.05"},
           {"delta", "0.05"},
           {"trials", "10"},
           {"plm_rounds", "100"}},
          run_certify}},
        {"qmc",
         {{{"model", "example10_1"},
           {"n", "3"},
           {"beta", "1"},
           {"m", "100"},
           {"mode", "exact"},
           {"sweeps", "20000"},
           {"burn_in", "2000"},
           {"eps", "0.01"},
           {"alpha_scale", "-1"},
           {"field", "0.5"}},
          run_qmc}},
        {"ease",
         {{{"model", "hidden"},
           {"d", "2"},
           {"instances", "5"},
           {"grid_x", "0.25,1"},
           {"grid_y", "0.8"},
           {"half_spin", "1"},
           {"alpha", "auto"},
           {"restarts", "auto"},
           {"max_iters", "auto"}},
          run_ease}},
        {"gadget",
         {{{"vertices", "3"}, {"edges", "0-1,1-2,0-2"}, {"all", "0"}, {"mode", "clifford"}, {"full_max_qubits", "6"}},
          run_gadget}},
        {"reproduce", {{{"target", ""}}, reproduce}},
    };
    return cmds;
}

}  // namespace

std::vector<std::string> subcommands() {
    std::vector<std::string> out;
    for (const auto& [k, v] : commands()) out.push_back(k);
    return out;
}

RunResult run(const std::string& subcommand, Config cfg) {
    auto it = commands().find(subcommand);
    if (it == commands().end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
    Defaults defaults = it->second.defaults;
    defaults["seed"] = "1";
    defaults["kind"] = subcommand;
    if (subcommand == "reproduce") {
        if (!cfg.has("target")) throw ConfigError("reproduce needs a target");
        auto rt = reproduce_defaults().find(cfg.str("target"));
        if (rt == reproduce_defaults().end()) throw ConfigError("unknown reproduce target '" + cfg.str("target") + "'");
        defaults = with(defaults, rt->second);
    }
    for (const auto& [k, v] : cfg.values)
        if (!defaults.count(k)) throw ConfigError("unknown key '" + k + "' for " + subcommand);
    if (cfg.has("kind") && cfg.str("kind") != subcommand)
        throw ConfigError("config kind '" + cfg.str("kind") + "' does not match subcommand " + subcommand);
    for (const auto& [k, v] : defaults)
        if (!cfg.has(k)) cfg.values[k] = v;
    return it->second.runner(cfg);
}

std::string format_csv(const ResultTable& t, const Config& cfg, const std::string& subcommand) {
    std::ostringstream out;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)cfg.hash());
    out << "# qrs " << subcommand << "\n";
    out << "# table=" << t.name << "\n";
    out << "# seed=" << (cfg.has("seed") ? cfg.str("seed") : "1") << "\n";
    out << "# config_hash=" << hash << "\n";
    for (const auto& [k, v] : cfg.values) out << "# config: " << k << "=" << v << "\n";
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << quote(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out << fmt_double(v);
                    else if constexpr (std::is_same_v<T, long long>) out << v;
                    else out << quote(v);
                },
                row[i]);
        }
        out << "\r\n";
    }
    return out.str();
}

namespace {
// config as actually run: defaults filled in, same as run() does
Config resolved(const std::string& subcommand, Config cfg) {
    auto it = commands().find(subcommand);
    Defaults defaults = it->second.defaults;
    defaults["seed"] = "1";
    defaults["kind"] = subcommand;
    if (subcommand == "reproduce") defaults = with(defaults, reproduce_defaults().at(cfg.str("target")));
    for (const auto& [k, v] : defaults)
        if (!cfg.has(k)) cfg.values[k] = v;
    return cfg;
}
}  // namespace

std::vector<std::filesystem::path> write_outputs(const RunResult& r, const Config& cfg_in, const std::string& subcommand,
                                                 const std::filesystem::path& out_dir) {
    const Config cfg = resolved(subcommand, cfg_in);
    std::filesystem::create_directories(out_dir);
    std::string base = subcommand;
    if (subcommand == "reproduce") base += "_" + cfg.str("target");
    std::vector<std::filesystem::path> paths;
    for (const auto& t : r.tables) {
        auto p = out_dir / (base + "_" + t.name + ".csv");
        std::ofstream(p, std::ios::binary) << format_csv(t, cfg, subcommand);
        paths.push_back(p);
    }
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)cfg.hash());
    j["config_hash"] = hash;
    j["config"] = cfg.values;
    j["summary"] = r.summary;
    auto jp = out_dir / (base + ".json");
    std::ofstream(jp, std::ios::binary) << j.dump(2) << "\n";
    paths.push_back(jp);
    return paths;
}

bool verify_csv(const std::filesystem::path& csv) {
    std::ifstream in(csv);
    if (!in) throw ConfigError("cannot read " + csv.string());
    std::string line, recorded;
    Config c;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        if (line.rfind("# config_hash=", 0) == 0) recorded = trim(line.substr(14));
        if (line.rfind("# config: ", 0) == 0) {
            auto kv = line.substr(10);
            auto eq = kv.find('=');
            c.values[kv.substr(0, eq)] = trim(kv.substr(eq + 1));
        }
    }
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)c.hash());
    return !recorded.empty() && recorded == hash;
}

std::filesystem::path default_output_dir() {
    const char* env = std::getenv("QRS_OUTPUT_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

int main_entry(int argc, char** argv) {
    CLI::App app{"qrs: random sampling, verification, certification and sign-problem workbench"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::vector<std::string> targets;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_dir, "output directory (default $QRS_OUTPUT_DIR or .)");
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : subcommands()) {
        static const std::map<std::string, std::string> about = {
            {"sample", "draw samples from a circuit family"},
            {"analyze", "Porter-Thomas distance, anticoncentration, entropies"},
            {"verify", "VV identity test, XEB, cross entropy, HOG, BOG"},
            {"certify", "fidelity witness, rapid fidelity estimation, PLM test"},
            {"qmc", "average sign and thermal expectations"},
            {"ease", "sign easing by orthogonal on-site transformations"},
            {"gadget", "MAXCUT gadgets and brute-force Clifford optima"},
            {"reproduce", "reproduce <fig4.4|fig4.5|fig10.1|fig11.2a|fig11.4|table7.5>"},
        };
        auto* s = app.add_subcommand(name, about.at(name));
        s->allow_extras();
        subs[name] = s;
    }
    auto* check = app.add_subcommand("check", "verify the config hash embedded in a result CSV");
    std::string check_file;
    check->add_option("file", check_file)->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (check->parsed()) {
            bool ok = verify_csv(check_file);
            std::cout << (ok ? "ok" : "hash mismatch") << "\n";
            return ok ? 0 : 4;
        }
        std::string name;
        CLI::App* used = nullptr;
        for (auto& [k, s] : subs)
            if (s->parsed()) {
                name = k;
                used = s;
            }
        // subcommand arguments: an optional positional target plus --key value / --key=value overrides
        std::map<std::string, std::string> overrides;
        auto extras = used->remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            std::string tok = extras[i];
            if (tok.rfind("--", 0) != 0) {
                if (name == "reproduce" && targets.empty()) {
                    targets.push_back(tok);
                    continue;
                }
                throw ConfigError("unexpected argument '" + tok + "'");
            }
            tok = tok.substr(2);
            std::string key = tok, value;
            if (auto eq = tok.find('='); eq != std::string::npos) {
                key = tok.substr(0, eq);
                value = tok.substr(eq + 1);
            } else {
                if (i + 1 >= extras.size()) throw ConfigError("flag --" + tok + " needs a value");
                value = extras[++i];
            }
            if (key == "config") config_path = value;
            else if (key == "out") out_dir = value;
            else overrides[key] = value;
        }
        Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        for (const auto& [k, v] : overrides) cfg.values[k] = v;
        if (!targets.empty()) cfg.values["target"] = targets.front();
        auto t0 = std::chrono::steady_clock::now();
        auto result = run(name, cfg);
        auto paths = write_outputs(result, cfg, name, out_dir.empty() ? default_output_dir() : std::filesystem::path(out_dir));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& p : paths) std::cout << p.string() << "\n";
        std::cerr << "wall time " << secs << " s\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace qrs::cli
