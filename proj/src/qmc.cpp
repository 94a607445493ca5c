#include "qrs/qmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qrs {

void RealHamiltonian::validate() const {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw ConfigError("hamiltonian: square, nonempty");
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError("hamiltonian: not symmetric");
    if (n_qubits >= 0 && matrix.rows() != (Eigen::Index(1) << n_qubits))
        throw ConfigError("hamiltonian: dimension is not 2^n");
}

TransferMatrix transfer_matrix(const RealHamiltonian& H, double beta, int m) {
    if (m < 1 || beta < 0) throw ConfigError("transfer matrix: m >= 1, beta >= 0");
    H.validate();
    TransferMatrix t;
    t.T = RMat::Identity(H.dim(), H.dim()) - (beta / m) * H.matrix;
    t.beta = beta;
    t.m = m;
    return t;
}

double path_amplitude(const RMat& T, const std::vector<Eigen::Index>& path) {
    double a = 1.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] < 0 || path[i] >= T.rows() || path[i + 1] < 0 || path[i + 1] >= T.rows())
            throw ConfigError("path index out of range");
        a *= T(path[i], path[i + 1]);
    }
    return a;
}

namespace {

RMat matrix_power(const RMat& A, int m) {
    RMat result = RMat::Identity(A.rows(), A.cols());
    RMat base = A;
    while (m > 0) {
        if (m & 1) result = result * base;
        m >>= 1;
        if (m) base = base * base;
    }
    return result;
}

// both traces share the scale 1/s^m, which cancels in ratios
double scale_of(const RMat& T) {
    double s = T.cwiseAbs().rowwise().sum().maxCoeff();
    return s > 0 ? s : 1.0;
}

}  // namespace

double average_sign_transfer(const RMat& T, int m) {
    if (T.rows() > dense_dimension_cap) throw CapExceeded("average sign: dimension above dense cap");
    const double s = scale_of(T);
    double num = matrix_power(T / s, m).trace();
    double den = matrix_power(T.cwiseAbs() / s, m).trace();
    if (!(den > 0)) throw NumericalError("average sign: zero denominator");
    return num / den;
}

double average_sign_exact(const RealHamiltonian& H, double beta, int m) {
    return average_sign_transfer(transfer_matrix(H, beta, m).T, m);
}

namespace {

struct PathChain {
    const RMat& T;
    int m;
    std::vector<Eigen::Index> path;
    int negatives = 0;

    PathChain(const RMat& t, int steps) : T(t), m(steps), path(steps) {
        Eigen::Index start;
        T.diagonal().cwiseAbs().maxCoeff(&start);
        std::fill(path.begin(), path.end(), start);
        for (int k = 0; k < m; ++k)
            if (factor(k) < 0) ++negatives;
    }

    double factor(int k) const { return T(path[k], path[(k + 1) % m]); }
    int sign() const { return (negatives % 2) ? -1 : 1; }

    void step(Rng& rng) {
        const int i = int(rng.below(std::uint64_t(m)));
        const Eigen::Index cand = Eigen::Index(rng.below(std::uint64_t(T.rows())));
        const Eigen::Index old = path[i];
        if (cand == old) return;
        const int prev = (i + m - 1) % m;
        double w_old, w_new;
        int neg_old = 0, neg_new = 0;
        if (m == 1) {
            w_old = T(old, old);
            w_new = T(cand, cand);
            neg_old = w_old < 0;
            neg_new = w_new < 0;
        } else {
            double f1 = factor(prev), f2 = factor(i);
            path[i] = cand;
            double g1 = factor(prev), g2 = factor(i);
            path[i] = old;
            w_old = f1 * f2;
            w_new = g1 * g2;
            neg_old = (f1 < 0) + (f2 < 0);
            neg_new = (g1 < 0) + (g2 < 0);
        }
        // a zero-weight start accepts any move until it reaches the support
        const double ao = std::fabs(w_old), an = std::fabs(w_new);
        if (ao > 0 && !(rng.uniform() * ao < an)) return;
        path[i] = cand;
        negatives += neg_new - neg_old;
    }

    // relabel a contiguous run of slices by a random involution-or-shift; symmetric, so plain Metropolis
    void segment_step(Rng& rng) {
        const auto D = std::uint64_t(T.rows());
        if (D < 2) return;
        const bool pow2 = (D & (D - 1)) == 0;
        const int len = 1 + int(rng.below(std::uint64_t(m)));
        const int start = int(rng.below(std::uint64_t(m)));
        const std::uint64_t r = 1 + rng.below(D - 1);
        auto moved = [&](Eigen::Index x) { return Eigen::Index(pow2 ? (std::uint64_t(x) ^ r) : (std::uint64_t(x) + r) % D); };
        // factors k with k or k+1 inside the run
        const int first = len == m ? 0 : (start + m - 1) % m;
        const int count = len == m ? m : len + 1;
        double log_old = 0, log_new = 0;
        int neg_old = 0, neg_new = 0;
        bool zero_old = false, zero_new = false;
        auto tally = [&](double& lg, int& neg, bool& zero) {
            for (int c = 0; c < count; ++c) {
                double f = factor((first + c) % m);
                if (f == 0) zero = true;
                else lg += std::log(std::fabs(f));
                neg += f < 0;
            }
        };
        tally(log_old, neg_old, zero_old);
        std::vector<Eigen::Index> saved(len);
        for (int c = 0; c < len; ++c) {
            auto& x = path[(start + c) % m];
            saved[c] = x;
            x = moved(x);
        }
        tally(log_new, neg_new, zero_new);
        const bool accept = zero_old || (!zero_new && std::log(rng.uniform()) < log_new - log_old);
        if (accept) {
            negatives += neg_new - neg_old;
            return;
        }
        for (int c = 0; c < len; ++c) path[(start + c) % m] = saved[c];
    }

    void sweep(Rng& rng) {
        for (int k = 0; k < m; ++k) step(rng);
        segment_step(rng);
    }
};

struct BatchRatio {
    std::vector<double> num, den;
};

Estimate ratio_estimate(const BatchRatio& b) {
    double N = 0, D = 0;
    for (std::size_t i = 0; i < b.num.size(); ++i) {
        N += b.num[i];
        D += b.den[i];
    }
    Estimate e;
    if (D == 0) throw NumericalError("mc: vanishing sign sum");
    e.value = N / D;
    const std::size_t B = b.num.size();
    if (B < 2) return e;
    double mean = 0, sq = 0;
    std::vector<double> r(B);
    for (std::size_t i = 0; i < B; ++i) {
        // jackknife over batches
        r[i] = (N - b.num[i]) / (D - b.den[i]);
        mean += r[i];
    }
    mean /= double(B);
    for (double x : r) sq += (x - mean) * (x - mean);
    e.stderr_ = std::sqrt(double(B - 1) / double(B) * sq);
    return e;
}

BatchRatio run_chain(const RMat& T, int m, const RVec* diagO, const ChainConfig& cfg, Rng& rng) {
    if (cfg.batches < 1 || cfg.sweeps < std::uint64_t(cfg.batches)) throw ConfigError("chain: sweeps >= batches >= 1");
    if ((T.cwiseAbs().rowwise().sum().array() <= 0).any()) throw ConfigError("chain: |T| has a zero row");
    PathChain chain(T, m);
    for (std::uint64_t s = 0; s < cfg.burn_in; ++s) chain.sweep(rng);
    BatchRatio br;
    br.num.assign(cfg.batches, 0.0);
    br.den.assign(cfg.batches, 0.0);
    const std::uint64_t per = cfg.sweeps / cfg.batches;
    for (int b = 0; b < cfg.batches; ++b)
        for (std::uint64_t s = 0; s < per; ++s) {
            chain.sweep(rng);
            double sg = chain.sign();
            br.den[b] += sg;
            br.num[b] += sg * (diagO ? (*diagO)[chain.path[0]] : 1.0);
        }
    return br;
}

}  // namespace

Estimate average_sign_mc(const RealHamiltonian& H, double beta, int m, const ChainConfig& cfg, Rng& rng) {
    auto t = transfer_matrix(H, beta, m);
    auto br = run_chain(t.T, m, nullptr, cfg, rng);
    Estimate e;
    double tot = 0;
    std::vector<double> means;
    const double per = double(cfg.sweeps / cfg.batches);
    for (double d : br.den) {
        tot += d;
        means.push_back(d / per);
    }
    e.value = tot / (per * double(br.den.size()));
    double sq = 0;
    for (double x : means) sq += (x - e.value) * (x - e.value);
    if (means.size() > 1) e.stderr_ = std::sqrt(sq / double(means.size() - 1) / double(means.size()));
    return e;
}

Estimate thermal_expectation(const RealHamiltonian& H, const RMat& O, double beta, int m, ExpectationMode mode,
                             Rng& rng, const ChainConfig& cfg) {
    H.validate();
    if (O.rows() != H.dim() || O.cols() != H.dim()) throw ConfigError("observable: dimension mismatch");
    RMat off = O;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0) throw ConfigError("observable must be diagonal");
    const RVec d = O.diagonal();
    switch (mode) {
        case ExpectationMode::Exact: {
            Eigen::SelfAdjointEigenSolver<RMat> es(H.matrix);
            const RVec& E = es.eigenvalues();
            const double e0 = E.minCoeff();
            double Z = 0, num = 0;
            for (Eigen::Index k = 0; k < E.size(); ++k) {
                double w = std::exp(-beta * (E[k] - e0));
                RVec v = es.eigenvectors().col(k);
                Z += w;
                num += w * v.cwiseAbs2().dot(d);
            }
            return {num / Z, 0.0};
        }
        case ExpectationMode::Transfer: {
            auto t = transfer_matrix(H, beta, m);
            if (t.T.rows() > dense_dimension_cap) throw CapExceeded("transfer: dimension above dense cap");
            RMat P = matrix_power(t.T / scale_of(t.T), m);
            double den = P.trace();
            if (den == 0) throw NumericalError("transfer: zero partition function");
            return {P.diagonal().dot(d) / den, 0.0};
        }
        case ExpectationMode::MonteCarlo: {
            auto t = transfer_matrix(H, beta, m);
            return ratio_estimate(run_chain(t.T, m, &d, cfg, rng));
        }
    }
    return {};
}

std::uint64_t sample_requirement(double avg_sign, double eps) {
    if (!(eps > 0)) throw ConfigError("sample requirement: eps > 0");
    if (avg_sign < 0 || avg_sign > 1) throw ConfigError("sample requirement: sign in [0, 1]");
    if (avg_sign == 0) return std::numeric_limits<std::uint64_t>::max();
    double v = 1.0 / (avg_sign * avg_sign * eps * eps);
    // guard against 1e4 * (1 + ulp) style rounding up
    double r = std::round(v);
    if (std::fabs(v - r) < 1e-9 * v) return std::uint64_t(r);
    return std::uint64_t(std::ceil(v));
}

RMat positive_offdiagonal(const RMat& H) {
    RMat P = RMat::Zero(H.rows(), H.cols());
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j)
            if (i != j && H(i, j) > 1e-12) P(i, j) = H(i, j);
    return P;
}

double nonstoq(const RealHamiltonian& H, double p) {
    if (!(p >= 1)) throw ConfigError("nonstoq: p >= 1");
    RMat P = positive_offdiagonal(H.matrix);
    double s = P.array().pow(p).sum();
    return std::pow(s, 1.0 / p) / double(H.dim());
}

void TwoLocalSpec::validate() const {
    if (n < 1) throw ConfigError("two-local: n >= 1");
    if (!alpha.empty() && int(alpha.size()) != n) throw ConfigError("two-local: alpha has wrong length");
    if (!gamma.empty() && int(gamma.size()) != n) throw ConfigError("two-local: gamma has wrong length");
    std::map<std::pair<int, int>, int> seen;
    for (const auto& e : edges) {
        if (e.i < 0 || e.j >= n || e.i >= e.j) throw ConfigError("two-local: edges need 0 <= i < j < n");
        if (seen[{e.i, e.j}]++) throw ConfigError("two-local: duplicate edge");
    }
}

RealHamiltonian dense_hamiltonian(const TwoLocalSpec& spec, int cap) {
    spec.validate();
    if (spec.n > cap) throw CapExceeded("two-local: too many qubits for a dense build");
    const std::uint64_t D = 1ULL << spec.n;
    RMat H = RMat::Zero(D, D);
    auto sg = [](std::uint64_t x, int k) { return bit(x, k) ? -1.0 : 1.0; };
    for (std::uint64_t x = 0; x < D; ++x) {
        for (const auto& e : spec.edges) {
            const double si = sg(x, e.i), sj = sg(x, e.j);
            const std::uint64_t both = x ^ (1ULL << e.i) ^ (1ULL << e.j);
            H(both, x) += e.a - e.b * si * sj;  // Y_i Y_j |x> = -s_i s_j |flip>
            H(x, x) += e.c * si * sj;
            H(x ^ (1ULL << e.i), x) += e.xij * sj;
            H(x ^ (1ULL << e.j), x) += e.xji * si;
        }
        for (int i = 0; i < spec.n; ++i) {
            if (!spec.alpha.empty()) H(x ^ (1ULL << i), x) += spec.alpha[i];
            if (!spec.gamma.empty()) H(x, x) += spec.gamma[i] * sg(x, i);
        }
    }
    return RealHamiltonian(H, spec.n);
}

double xz_sum_exact(double alpha, const std::vector<double>& x) {
    const int k = int(x.size());
    if (k > 30) throw CapExceeded("xz sum: degree too large to enumerate");
    double s = 0;
    for (std::uint64_t l = 0; l < (1ULL << k); ++l) {
        double v = alpha;
        for (int j = 0; j < k; ++j) v += bit(l, j) ? -x[j] : x[j];
        s += std::max(v, 0.0);
    }
    return s / double(1ULL << k);
}

double nu1_two_local_closed(const TwoLocalSpec& spec) {
    spec.validate();
    double nu = 0;
    std::vector<std::vector<double>> xz(spec.n);
    for (const auto& e : spec.edges) {
        nu += 0.5 * (std::max(e.a + e.b, 0.0) + std::max(e.a - e.b, 0.0));
        if (e.xij != 0) xz[e.i].push_back(e.xij);
        if (e.xji != 0) xz[e.j].push_back(e.xji);
    }
    for (int i = 0; i < spec.n; ++i) {
        double a = spec.alpha.empty() ? 0.0 : spec.alpha[i];
        nu += xz_sum_exact(a, xz[i]);
    }
    return nu;
}

std::uint64_t nu1_xz_samples(const std::vector<double>& x, double eps, double delta) {
    if (x.empty()) throw ConfigError("xz mc: degree >= 1");
    if (!(eps > 0) || !(delta > 0 && delta < 1)) throw ConfigError("xz mc: eps > 0, delta in (0,1)");
    double mx = 0;
    for (double v : x) mx = std::max(mx, std::fabs(v));
    double m = 16.0 * double(x.size()) * mx * mx * std::log(2 / delta) / (eps * eps);
    return std::max<std::uint64_t>(1, std::uint64_t(std::ceil(m)));
}

double nu1_xz_mc(double alpha, const std::vector<double>& x, double eps, double delta, Rng& rng) {
    const std::uint64_t m = nu1_xz_samples(x, eps, delta);
    const int k = int(x.size());
    double s = 0;
    for (std::uint64_t t = 0; t < m; ++t) {
        double v = alpha;
        std::uint64_t r = 0;
        for (int j = 0; j < k; ++j) {
            if (j % 64 == 0) r = rng.next();
            v += (r & 1) ? -x[j] : x[j];
            r >>= 1;
        }
        s += std::max(v, 0.0);
    }
    return s / double(m);
}

RealHamiltonian example_10_1(int n) {
    if (n < 2 || n > 12) throw ConfigError("example_10_1: 2 <= n <= 12");
    TwoLocalSpec s;
    s.n = n;
    s.alpha.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            TwoLocalEdge e;
            e.i = i;
            e.j = j;
            e.a = -0.5;
            e.b = 0.5;
            s.edges.push_back(e);
            s.alpha[i] += 1.0;  // the X_i inside h_ij
        }
    auto H = dense_hamiltonian(s);
    H.matrix += RMat::Identity(H.dim(), H.dim());
    return H;
}

TransferMatrix example_10_2(double a, double b, int m, double beta) {
    if (!(b >= a && a > 0)) throw ConfigError("example_10_2: b >= a > 0");
    TransferMatrix t;
    t.T.resize(4, 4);
    t.T << 0, 1, -b, 0, 1, 0, 1, a, -b, 1, 0, 1, 0, a, 1, 0;
    t.m = m;
    t.beta = beta;
    return t;
}

double example_10_2_bound(double a, double b, int m) { return (std::pow(2.0, m - 1) - 0.5) * std::fabs(b - a) / a; }

RealHamiltonian h_alpha(const RealHamiltonian& H, double alpha) {
    RMat Hm = positive_offdiagonal(H.matrix);
    double l1 = Hm.sum();  // 2^n nu_1(H_-)
    if (!(l1 > 0)) throw ConfigError("h_alpha: H is stoquastic");
    return RealHamiltonian((H.matrix - Hm + alpha * Hm) / l1, H.n_qubits);
}

RealHamiltonian chain_hamiltonian(const RMat& h, int d, int n, bool periodic) {
    if (d < 1 || n < 2) throw ConfigError("chain: d >= 1, n >= 2");
    if (h.rows() != d * d || h.cols() != d * d) throw ConfigError("chain: h must be d^2 x d^2");
    double Dd = std::pow(double(d), n);
    if (Dd > double(dense_dimension_cap)) throw CapExceeded("chain: dimension above dense cap");
    const Eigen::Index D = Eigen::Index(Dd);
    std::vector<Eigen::Index> w(n + 1, 1);
    for (int k = 1; k <= n; ++k) w[k] = w[k - 1] * d;
    RMat H = RMat::Zero(D, D);
    const int bonds = periodic ? n : n - 1;
    for (int i = 0; i < bonds; ++i) {
        const int j = (i + 1) % n;
        for (Eigen::Index x = 0; x < D; ++x) {
            const int a = int((x / w[i]) % d), b = int((x / w[j]) % d);
            const Eigen::Index rest = x - a * w[i] - b * w[j];
            const int col = a * d + b;
            for (int a2 = 0; a2 < d; ++a2)
                for (int b2 = 0; b2 < d; ++b2) {
                    double v = h(a2 * d + b2, col);
                    if (v != 0) H(rest + a2 * w[i] + b2 * w[j], x) += v;
                }
        }
    }
    RealHamiltonian r(H);
    if (d == 2) r.n_qubits = n;
    return r;
}

RMat gaussian_symmetric(int dim, Rng& rng) {
    RMat G(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
    return 0.5 * (G + G.transpose());
}

}  // namespace qrs
