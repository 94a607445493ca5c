#include "qrs/certification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qrs/random_matrix.hpp"

namespace qrs {

int PauliProduct::support() const {
    int s = 0;
    for (const auto& f : sites)
        if (f.kind != Factor::I) ++s;
    return s;
}

Eigen::Matrix2cd factor_matrix(const SiteFactor& f) {
    const cplx i(0, 1);
    Eigen::Matrix2cd X, Y, Z;
    X << 0, 1, 1, 0;
    Y << 0, -i, i, 0;
    Z << 1, 0, 0, -1;
    const double c = std::cos(f.beta), s = std::sin(f.beta);
    switch (f.kind) {
        case Factor::I: return Eigen::Matrix2cd::Identity();
        case Factor::X: return X;
        case Factor::Zb: return c * Z - s * Y;
        case Factor::Yb: return c * Y + s * Z;
    }
    return Eigen::Matrix2cd::Identity();
}

void apply_product(const PauliProduct& p, CMat& M) {
    const int n = p.n_qubits();
    if (M.rows() != (Eigen::Index(1) << n)) throw ConfigError("apply_product: dimension mismatch");
    for (int q = 0; q < n; ++q) {
        if (p.sites[q].kind == Factor::I) continue;
        const auto f = factor_matrix(p.sites[q]);
        const std::uint64_t step = 1ULL << q;
        for (std::uint64_t i = 0; i < std::uint64_t(M.rows()); ++i) {
            if (i & step) continue;
            const std::uint64_t j = i | step;
            for (Eigen::Index c = 0; c < M.cols(); ++c) {
                cplx a = M(i, c), b = M(j, c);
                M(i, c) = f(0, 0) * a + f(0, 1) * b;
                M(j, c) = f(1, 0) * a + f(1, 1) * b;
            }
        }
    }
    M *= p.coefficient;
}

CMat product_matrix(const PauliProduct& p) {
    CMat M = CMat::Identity(Eigen::Index(1) << p.n_qubits(), Eigen::Index(1) << p.n_qubits());
    apply_product(p, M);
    return M;
}

double expectation(const PauliProduct& p, const CMat& rho) {
    CMat M = rho;
    apply_product(p, M);
    return M.trace().real();
}

double expectation(const PauliProduct& p, const CVec& psi) {
    CMat M = psi;
    apply_product(p, M);
    return psi.dot(M.col(0)).real();
}

CMat hamiltonian_matrix(const LocalHamiltonian& H) {
    const Eigen::Index D = Eigen::Index(1) << H.n_qubits;
    CMat M = H.offset * CMat::Identity(D, D);
    for (const auto& t : H.terms) M += product_matrix(t);
    return M;
}

double energy(const LocalHamiltonian& H, const CMat& rho) {
    double e = H.offset * rho.trace().real();
    for (const auto& t : H.terms) e += expectation(t, rho);
    return e;
}

namespace {

std::vector<std::vector<int>> neighbours(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> nb(n);
    for (auto [a, b] : edges) {
        nb[a].push_back(b);
        nb[b].push_back(a);
    }
    return nb;
}

// sum_k (1 - S_k) with S_k = Zb(beta_k)_k prod_{j~k} X_j
LocalHamiltonian star_parent(int n, const std::vector<double>& beta, const std::vector<std::vector<int>>& nb) {
    LocalHamiltonian H;
    H.n_qubits = n;
    int loc = 0;
    for (int k = 0; k < n; ++k) {
        PauliProduct t(n);
        t.coefficient = -1.0;
        t.sites[k] = {Factor::Zb, beta[k]};
        for (int j : nb[k]) t.sites[j] = {Factor::X, 0.0};
        loc = std::max(loc, t.support());
        H.terms.push_back(t);
    }
    H.offset = n;
    H.e0 = 0.0;
    H.gap = 2.0;
    H.norm_bound = 2.0 * n;
    H.term_norm = 2.0;
    H.locality = loc;
    return H;
}

}  // namespace

LocalHamiltonian beta_parent(const ClusterScheme& scheme) {
    scheme.validate();
    return star_parent(scheme.size(), scheme.beta, neighbours(scheme.size(), scheme.edges()));
}

LocalHamiltonian cluster_parent(int rows, int cols) {
    ClusterScheme s{rows, cols, std::vector<double>(rows * cols, 0.0)};
    return beta_parent(s);
}

LocalHamiltonian iqp_parent(const IQPWeights& w) {
    w.validate();
    const int n = w.n;
    const double tol = 1e-9;
    auto multiple_of = [&](double x, double unit) {
        double r = x / unit;
        return std::fabs(r - std::round(r)) < tol;
    };
    // exp(i k pi/4 ZZ) = CZ^(k mod 2) exp(i k pi/4 Z) exp(i k pi/4 Z) up to phase
    std::vector<std::pair<int, int>> edges;
    std::vector<double> wbar(n);
    for (int i = 0; i < n; ++i) {
        if (!multiple_of(w.W(i, i), kPi / 8)) throw ConfigError("iqp_parent: diagonal weights must be multiples of pi/8");
        wbar[i] = w.W(i, i);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!multiple_of(w.W(i, j), kPi / 4))
                throw ConfigError("iqp_parent: off-diagonal weights must be multiples of pi/4");
            const long k = std::lround(w.W(i, j) / (kPi / 4));
            if (k % 2 != 0) edges.emplace_back(i, j);
            wbar[i] += double(k) * kPi / 4;
            wbar[j] += double(k) * kPi / 4;
        }
    auto nb = neighbours(n, edges);
    std::vector<double> beta(n);
    for (int i = 0; i < n; ++i) beta[i] = -2.0 * wbar[i];
    return star_parent(n, beta, nb);
}

NoisyPreparation NoisyPreparation::from_density(const CMat& rho) {
    NoisyPreparation p;
    p.rho = rho;
    p.n_qubits = int(std::lround(std::log2(double(rho.rows()))));
    p.validate();
    return p;
}

NoisyPreparation NoisyPreparation::from_state(const CVec& psi) { return from_density(pure_density(psi)); }

void NoisyPreparation::validate() const {
    if (rho.size() == 0) {
        if (!sampler) throw ConfigError("preparation: neither density operator nor sampler");
        return;
    }
    if (rho.rows() != rho.cols() || rho.rows() != (Eigen::Index(1) << n_qubits))
        throw ConfigError("preparation: density operator must be 2^n square");
    if ((rho - rho.adjoint()).norm() > 1e-9) throw ConfigError("preparation: density operator not Hermitian");
    if (std::abs(rho.trace() - 1.0) > 1e-9) throw ConfigError("preparation: trace must be 1");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) throw ConfigError("preparation: density operator not PSD");
}

std::uint64_t measure_plus(const NoisyPreparation& prep, const PauliProduct& p, std::uint64_t m, Rng& rng) {
    PauliProduct unit = p;
    unit.coefficient = 1.0;
    if (prep.rho.size() > 0) {
        double e = std::clamp(expectation(unit, prep.rho), -1.0, 1.0);
        std::binomial_distribution<std::uint64_t> bin(m, 0.5 * (1.0 + e));
        return bin(rng);
    }
    std::uint64_t plus = 0;
    for (std::uint64_t i = 0; i < m; ++i)
        if (prep.sampler(unit, rng) > 0) ++plus;
    return plus;
}

CMat pure_density(const CVec& psi) { return psi * psi.adjoint(); }

CMat depolarize(const CMat& rho, double p) {
    if (p < 0 || p > 1) throw ConfigError("depolarize: p in [0,1]");
    const auto D = rho.rows();
    return (1 - p) * rho + p * CMat::Identity(D, D) / double(D);
}

CMat random_mixed_state(int dim, int rank, Rng& rng) {
    CMat G = ginibre(dim, rank, rng);
    CMat r = G * G.adjoint();
    return r / r.trace().real();
}

double fidelity_pure(const CVec& psi, const CMat& sigma) { return psi.dot(sigma * psi).real(); }

CVec scheme_state(const ClusterScheme& scheme) { return simulate(cluster_circuit(scheme)).amplitudes; }

FidelityBounds fidelity_bounds(const LocalHamiltonian& H, const NoisyPreparation& prep) {
    if (!(H.gap > 0) || !(H.norm_bound > 0)) throw ConfigError("fidelity_bounds: gap and norm bound required");
    if (prep.rho.size() == 0) throw ConfigError("fidelity_bounds: density operator required");
    double e = energy(H, prep.rho) - H.e0;
    return {1.0 - e / H.gap, 1.0 - e / H.norm_bound};
}

std::uint64_t witness_measurements(const LocalHamiltonian& H, double eps, double alpha) {
    if (!(eps > 0) || !(alpha > 0 && alpha < 1)) throw ConfigError("witness: eps > 0, alpha in (0,1)");
    const double n = double(H.terms.size());
    const double J = H.term_norm;
    double lg = std::log(-(n + 1) / std::log(1 - alpha));
    double m = J * J * n * n / (2 * H.gap * H.gap * eps * eps) * std::max(lg, 0.0);
    return std::max<std::uint64_t>(1, std::uint64_t(std::ceil(m)));
}

double witness_gap(double f_t, double gap, double norm, double eps) {
    return (1 - f_t) * (1 - gap / norm) + 2 * eps * gap / norm;
}

WitnessVerdict witness_test(const NoisyPreparation& prep, const LocalHamiltonian& H, double f_t, double alpha,
                            double eps, Rng& rng, std::uint64_t cap) {
    if (eps > (1 - f_t) / 2 + 1e-15) throw ConfigError("witness: eps <= (1 - F_T)/2 required");
    WitnessVerdict v;
    v.m = witness_measurements(H, eps, alpha);
    if (v.m > cap) throw CapExceeded("witness: measurement count exceeds cap");
    double e = H.offset - H.e0;
    for (std::size_t t = 0; t < H.terms.size(); ++t) {
        Rng r = rng.split(t);
        double plus = double(measure_plus(prep, H.terms[t], v.m, r));
        e += H.terms[t].coefficient * (2 * plus / double(v.m) - 1);
    }
    v.witness = 1 - e / H.gap;
    v.threshold = f_t + eps;
    v.accept = !(v.witness < v.threshold);
    v.delta = witness_gap(f_t, H.gap, H.norm_bound, eps);
    return v;
}

PauliProduct stabilizer_product(const ClusterScheme& scheme, std::uint64_t x) {
    const int n = scheme.size();
    auto nb = neighbours(n, scheme.edges());
    // X^a Z^b per site, global sign (-1)^sign
    std::vector<int> a(n, 0), b(n, 0);
    int sign = 0;
    for (int k = 0; k < n; ++k) {
        if (!bit(x, k)) continue;
        std::vector<int> a2(n, 0), b2(n, 0);
        a2[k] = 1;
        for (int j : nb[k]) b2[j] = 1;
        for (int q = 0; q < n; ++q) sign ^= b[q] & a2[q];
        for (int q = 0; q < n; ++q) {
            a[q] ^= a2[q];
            b[q] ^= b2[q];
        }
    }
    // conjugation by H^N RZ(beta): X -> Zb, Z -> X, XZ -> i Yb
    PauliProduct p(n);
    int ipow = 2 * sign;
    for (int q = 0; q < n; ++q) {
        double be = scheme.beta[q];
        if (a[q] && b[q]) {
            p.sites[q] = {Factor::Yb, be};
            ipow += 1;
        } else if (a[q]) {
            p.sites[q] = {Factor::Zb, be};
        } else if (b[q]) {
            p.sites[q] = {Factor::X, 0.0};
        }
    }
    if (ipow % 2 != 0) throw NumericalError("stabilizer: non-Hermitian product");
    p.coefficient = (ipow % 4 == 0) ? 1.0 : -1.0;
    return p;
}

PauliProduct stabilizer_sample(const ClusterScheme& scheme, Rng& rng) {
    const int n = scheme.size();
    if (n > 63) throw CapExceeded("stabilizer_sample: too many sites");
    return stabilizer_product(scheme, rng.below(1ULL << n));
}

std::uint64_t rapid_fidelity_rounds(double eps, double delta) {
    if (!(eps > 0) || !(delta > 0 && delta < 1)) throw ConfigError("rapid fidelity: eps > 0, delta in (0,1)");
    return std::uint64_t(std::ceil(std::log(2 / delta) * 2 / (eps * eps)));
}

double rapid_fidelity(const NoisyPreparation& prep, const ClusterScheme& scheme, double eps, double delta, Rng& rng) {
    const int n = scheme.size();
    const std::uint64_t m = rapid_fidelity_rounds(eps, delta);
    double sum = 0;
    if (prep.rho.size() > 0) {
        if (n > 14) throw CapExceeded("rapid fidelity: density operator too large");
        std::vector<double> table(std::size_t(1) << n);
        for (std::uint64_t x = 0; x < table.size(); ++x)
            table[x] = std::clamp(expectation(stabilizer_product(scheme, x), prep.rho), -1.0, 1.0);
        for (std::uint64_t i = 0; i < m; ++i) {
            double t = table[rng.below(table.size())];
            sum += rng.uniform() < 0.5 * (1 + t) ? 1.0 : -1.0;
        }
    } else {
        for (std::uint64_t i = 0; i < m; ++i) {
            auto s = stabilizer_sample(scheme, rng);
            double c = s.coefficient;
            s.coefficient = 1.0;
            sum += c * prep.sampler(s, rng);
        }
    }
    return sum / double(m);
}

double stabilizer_group_average(const ClusterScheme& scheme, const CMat& sigma) {
    const int n = scheme.size();
    if (n > 14) throw CapExceeded("group average: too many sites");
    double s = 0;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) s += expectation(stabilizer_product(scheme, x), sigma);
    return s / double(1ULL << n);
}

namespace {
CMat omega(const Strategy& s) {
    if (s.empty()) throw ConfigError("strategy: empty");
    double tot = 0;
    CMat O = CMat::Zero(s[0].projector.rows(), s[0].projector.cols());
    for (const auto& e : s) {
        if (e.mu < 0) throw ConfigError("strategy: negative weight");
        if (e.projector.rows() != O.rows() || e.projector.cols() != O.cols())
            throw ConfigError("strategy: projector dimensions differ");
        tot += e.mu;
        O += e.mu * e.projector;
    }
    if (std::fabs(tot - 1) > 1e-9) throw ConfigError("strategy: weights must sum to 1");
    return O;
}
}  // namespace

double strategy_gap(const Strategy& s) {
    Eigen::SelfAdjointEigenSolver<CMat> es(omega(s), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev.size() < 2) return 1.0;
    return 1.0 - ev[ev.size() - 2];
}

std::uint64_t plm_required_rounds(double gap, double eps, double delta) {
    if (!(gap > 0) || !(eps > 0) || !(delta > 0 && delta < 1)) throw ConfigError("plm: positive gap, eps, delta");
    return std::uint64_t(std::ceil(std::log(1 / delta) / (eps * gap)));
}

PLMVerdict plm_test(const NoisyPreparation& prep, const Strategy& strategy, std::uint64_t m, Rng& rng) {
    if (prep.rho.size() == 0) throw ConfigError("plm: density operator required");
    for (const auto& e : strategy) {
        if ((e.projector - e.projector.adjoint()).norm() > 1e-9) throw ConfigError("strategy: projector not Hermitian");
        Eigen::SelfAdjointEigenSolver<CMat> es(e.projector, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9 || es.eigenvalues().maxCoeff() > 1 + 1e-9)
            throw ConfigError("strategy: operator outside [0, 1]");
    }
    PLMVerdict v;
    v.gap = strategy_gap(strategy);
    std::vector<double> pass(strategy.size()), mu(strategy.size());
    for (std::size_t j = 0; j < strategy.size(); ++j) {
        pass[j] = (strategy[j].projector * prep.rho).trace().real();
        mu[j] = strategy[j].mu;
    }
    std::discrete_distribution<std::size_t> pick(mu.begin(), mu.end());
    v.accept = true;
    for (std::uint64_t i = 0; i < m; ++i) {
        ++v.rounds_run;
        if (!(rng.uniform() < pass[pick(rng)])) {
            v.accept = false;
            break;
        }
    }
    return v;
}

Strategy generator_strategy(const std::vector<PauliProduct>& generators) {
    Strategy s;
    for (const auto& g : generators) {
        CMat P = product_matrix(g);
        P = 0.5 * (CMat::Identity(P.rows(), P.cols()) + P);
        s.push_back({1.0 / double(generators.size()), P});
    }
    return s;
}

double threshold_fidelity(double eps_tv) {
    if (!(eps_tv > 0) || eps_tv > 1) throw ConfigError("threshold fidelity: eps in (0, 1]");
    return 1 - eps_tv * eps_tv;
}

}  // namespace qrs
