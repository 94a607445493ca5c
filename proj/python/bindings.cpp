#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "qrs/analysis.hpp"
#include "qrs/certification.hpp"
#include "qrs/circuit.hpp"
#include "qrs/easing.hpp"
#include "qrs/experiments.hpp"
#include "qrs/qmc.hpp"
#include "qrs/samplers.hpp"
#include "qrs/verification.hpp"

namespace py = pybind11;
using namespace qrs;

namespace {

SampleSet as_samples(const std::vector<std::uint64_t>& s, const Probs& target) {
    SampleSet set{target.size(), s};
    set.validate();
    return set;
}

py::object cell(const cli::Cell& c) {
    return std::visit([](const auto& v) -> py::object { return py::cast(v); }, c);
}

py::dict run(const std::string& subcommand, const std::map<std::string, std::string>& values) {
    cli::Config cfg{values};
    auto r = cli::run(subcommand, cfg);
    py::dict tables;
    for (const auto& t : r.tables) {
        py::list rows;
        for (const auto& row : t.rows) {
            py::list out;
            for (const auto& c : row) out.append(cell(c));
            rows.append(out);
        }
        tables[py::str(t.name)] = py::dict(py::arg("columns") = t.columns, py::arg("rows") = rows);
    }
    return py::dict(py::arg("tables") = tables, py::arg("summary") = r.summary.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_MemoryError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("run", &run, py::arg("subcommand"), py::arg("config") = std::map<std::string, std::string>{},
          "Run a CLI subcommand in-process; returns tables and the JSON summary text.");
    m.def("subcommands", &cli::subcommands);

    // circuits
    m.def(
        "cluster_distribution",
        [](int rows, int cols, std::vector<double> beta) {
            return born_distribution(simulate(cluster_circuit(ClusterScheme{rows, cols, std::move(beta)})));
        },
        py::arg("rows"), py::arg("cols"), py::arg("beta"));
    m.def(
        "iqp_distribution",
        [](const RMat& W) { return born_distribution(simulate(iqp_circuit(IQPWeights{int(W.rows()), W, std::nullopt}))); },
        py::arg("W"));
    m.def(
        "random_circuit_distribution",
        [](int n, int depth, std::uint64_t seed) {
            Rng rng(seed);
            return born_distribution(simulate(random_parallel_circuit(n, depth, rng)));
        },
        py::arg("n"), py::arg("depth"), py::arg("seed") = 1);
    m.def(
        "sample",
        [](const Probs& p, std::size_t count, std::uint64_t seed) {
            Rng rng(seed);
            return inverse_cdf_sample(validate_probs(p), count, rng).samples;
        },
        py::arg("probs"), py::arg("count"), py::arg("seed") = 1);

    // distribution analysis
    m.def("porter_thomas_vector", &porter_thomas_vector, py::arg("D"));
    m.def("tv_distance", &tv_distance);
    m.def("tv_to_porter_thomas", &tv_to_porter_thomas, py::arg("probs"), py::arg("m_bins"));
    m.def("anticonc_fraction", &anticonc_fraction, py::arg("probs"), py::arg("alpha") = 1.0);
    m.def("shannon_entropy", &shannon_entropy);
    m.def("min_entropy", &min_entropy);
    m.def("renyi_entropy", &renyi_entropy, py::arg("probs"), py::arg("alpha"));
    m.def(
        "vv_sample_bounds",
        [](const Probs& p, double eps) {
            auto b = vv_sample_bounds(p, eps);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("probs"), py::arg("eps"));

    // verification
    m.def("xeb_exact", &xeb_exact, py::arg("Q"), py::arg("target"));
    m.def("hog_fidelity_exact", &hog_fidelity_exact, py::arg("Q"), py::arg("target"));
    m.def("ce_difference_exact", &ce_difference_exact, py::arg("Q"), py::arg("target"), py::arg("bits") = false);
    m.def("bog_distance_exact", &bog_distance_exact, py::arg("Q"), py::arg("target"), py::arg("m_bins"));
    m.def(
        "xeb_fidelity", [](const std::vector<std::uint64_t>& s, const Probs& t) { return xeb_fidelity(as_samples(s, t), t); },
        py::arg("samples"), py::arg("target"));
    m.def(
        "hog_fidelity", [](const std::vector<std::uint64_t>& s, const Probs& t) { return hog_fidelity(as_samples(s, t), t); },
        py::arg("samples"), py::arg("target"));
    m.def(
        "vv_identity_test",
        [](const std::vector<std::uint64_t>& s, const Probs& t, double eps) {
            return vv_identity_test(as_samples(s, t), t, eps).accept;
        },
        py::arg("samples"), py::arg("target"), py::arg("eps"));
    m.def("row_norm", &row_norm);

    // certification
    m.def(
        "cluster_fidelity_bounds",
        [](int rows, int cols, const CMat& rho) {
            auto b = fidelity_bounds(cluster_parent(rows, cols), NoisyPreparation::from_density(rho));
            return py::make_tuple(b.f_min, b.f_max);
        },
        py::arg("rows"), py::arg("cols"), py::arg("rho"));
    m.def(
        "cluster_state",
        [](int rows, int cols, std::vector<double> beta) { return scheme_state(ClusterScheme{rows, cols, std::move(beta)}); },
        py::arg("rows"), py::arg("cols"), py::arg("beta"));
    m.def("witness_gap", &witness_gap, py::arg("f_t"), py::arg("gap"), py::arg("norm"), py::arg("eps"));
    m.def("rapid_fidelity_rounds", &rapid_fidelity_rounds, py::arg("eps"), py::arg("delta"));
    m.def("threshold_fidelity", &threshold_fidelity, py::arg("eps_tv"));

    // sign problem
    m.def(
        "average_sign",
        [](const RMat& H, double beta, int m_steps) { return average_sign_exact(RealHamiltonian(H), beta, m_steps); },
        py::arg("H"), py::arg("beta"), py::arg("m"));
    m.def(
        "nonstoq", [](const RMat& H, double p) { return nonstoq(RealHamiltonian(H), p); }, py::arg("H"),
        py::arg("p") = 1.0);
    m.def("sample_requirement", &sample_requirement, py::arg("avg_sign"), py::arg("eps"));
    m.def(
        "example_10_1", [](int n) { return example_10_1(n).matrix; }, py::arg("n"));

    // sign easing
    m.def(
        "ease_ladder",
        [](double jpar, double jperp, double jx, std::uint64_t seed) {
            Rng rng(seed);
            auto p = ease_term(ladder_term(jpar, jperp, jx), ladder_optimizer(), rng);
            return py::make_tuple(p.nu_before, p.nu_after);
        },
        py::arg("jpar"), py::arg("jperp"), py::arg("jx"), py::arg("seed") = 1);
    m.def(
        "ease_hidden",
        [](int d, std::uint64_t seed) {
            Rng rng(seed);
            auto h = hidden_stoquastic_term(d, rng);
            auto p = ease_term(h, hidden_optimizer(), rng);
            return py::make_tuple(p.nu_before, p.nu_after);
        },
        py::arg("d"), py::arg("seed") = 1);
    m.def(
        "maxcut", [](int v, std::vector<std::pair<int, int>> edges) { return maxcut(Graph{v, std::move(edges)}); },
        py::arg("v"), py::arg("edges"));
    m.def("xz_lower_bound", &xz_lower_bound);
    m.def("xz_enumeration", &xz_enumeration);
}
