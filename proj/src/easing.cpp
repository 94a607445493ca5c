#include "qrs/easing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qrs/random_matrix.hpp"

namespace qrs {

void LocalTerm::validate() const {
    if (d < 1 || h.rows() != d * d || h.cols() != d * d) throw ConfigError("local term: h must be d^2 x d^2");
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError("local term: not symmetric");
}

RMat kron(const RMat& A, const RMat& B) {
    RMat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

LocalTerm conjugate_local(const LocalTerm& h, const RMat& O) {
    if (O.rows() != h.d || O.cols() != h.d) throw ConfigError("conjugate_local: O must be d x d");
    RMat C = kron(O, O);
    return {h.d, C * h.h * C.transpose()};
}

double smooth_max(double x, double alpha) {
    const double ax = alpha * x;
    if (ax >= 0) return x + std::log1p(std::exp(-ax)) / alpha;
    return std::log1p(std::exp(ax)) / alpha;
}

namespace {

double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

std::size_t effective_terms(int d) { return std::size_t(d) * d * d * d * (d - 1); }

double effective_objective(const LocalTerm& t, EntryPenalty g, double alpha, RMat* grad_h) {
    const int d = t.d;
    const RMat& h = t.h;
    if (grad_h) grad_h->setZero(h.rows(), h.cols());
    double val = 0;
    for (int i1 = 0; i1 < d; ++i1)
        for (int i2 = 0; i2 < d; ++i2)
            for (int i3 = 0; i3 < d; ++i3)
                for (int j1 = 0; j1 < d; ++j1)
                    for (int j2 = 0; j2 < d; ++j2) {
                        if (j2 == i2) continue;
                        const int r1 = i1 * d + i2, c1 = j1 * d + j2;
                        const int r2 = i2 * d + i3, c2 = j2 * d + i3;
                        double E = h(r1, c1);
                        if (i1 == j1) E += h(r2, c2);
                        double dg = 0;
                        switch (g) {
                            case EntryPenalty::Max:
                                val += std::max(E, 0.0);
                                dg = E > 0 ? 1.0 : 0.0;
                                break;
                            case EntryPenalty::Smooth:
                                val += smooth_max(E, alpha);
                                dg = sigmoid(alpha * E);
                                break;
                            case EntryPenalty::MaxSquared:
                                val += E > 0 ? E * E : 0.0;
                                dg = E > 0 ? 2 * E : 0.0;
                                break;
                        }
                        if (grad_h && dg != 0) {
                            (*grad_h)(r1, c1) += dg;
                            if (i1 == j1) (*grad_h)(r2, c2) += dg;
                        }
                    }
    return val;
}

double effective_nu1(const LocalTerm& h) { return effective_objective(h, EntryPenalty::Max, 0.0); }

namespace {
EntryPenalty penalty_for(int p) {
    if (p == 1) return EntryPenalty::Smooth;
    if (p == 2) return EntryPenalty::MaxSquared;
    throw ConfigError("objective: p must be 1 or 2");
}
}  // namespace

double smooth_objective(const LocalTerm& h, double alpha, int p) {
    if (!(alpha > 0)) throw ConfigError("smooth objective: alpha > 0");
    return effective_objective(h, penalty_for(p), alpha);
}

double objective_at(const LocalTerm& h, const RMat& O, EntryPenalty g, double alpha) {
    return effective_objective(conjugate_local(h, O), g, alpha);
}

RMat objective_gradient(const LocalTerm& h, const RMat& O, EntryPenalty g, double alpha) {
    const int d = h.d;
    const RMat C = kron(O, O);
    LocalTerm hO{d, C * h.h * C.transpose()};
    RMat Gh;
    effective_objective(hO, g, alpha, &Gh);
    // d/dC of F(C h C^T)
    RMat GC = Gh * C * h.h.transpose() + Gh.transpose() * C * h.h;
    // C[(a b),(c e)] = O[a,c] O[b,e]
    RMat G = RMat::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) {
            double s = 0;
            for (int b = 0; b < d; ++b)
                for (int e = 0; e < d; ++e) {
                    s += GC(a * d + b, c * d + e) * O(b, e);
                    s += GC(b * d + a, e * d + c) * O(b, e);
                }
            G(a, c) = s;
        }
    return G;
}

RMat objective_gradient(const LocalTerm& h, const RMat& O, double alpha, int p) {
    return objective_gradient(h, O, penalty_for(p), alpha);
}

void OptimizerConfig::validate() const {
    if (p != 1 && p != 2) throw ConfigError("optimizer: p in {1, 2}");
    if (!(alpha > 0)) throw ConfigError("optimizer: alpha > 0");
    if (max_iters < 0 || restarts < 1) throw ConfigError("optimizer: max_iters >= 0, restarts >= 1");
    if (!(grad_tol >= 0)) throw ConfigError("optimizer: grad_tol >= 0");
}

RMat cayley(const RMat& W) {
    const auto I = RMat::Identity(W.rows(), W.cols());
    return (I - 0.5 * W).partialPivLu().solve(I + 0.5 * W);
}

RMat polar_orthogonal(const RMat& M) {
    Eigen::JacobiSVD<RMat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

RMat initial_point(int d, InitKind kind, double perturbation, int restart, Rng& rng) {
    RMat O;
    switch (kind) {
        case InitKind::Identity: O = RMat::Identity(d, d); break;
        case InitKind::PerturbedIdentity: {
            RMat K(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) K(i, j) = rng.normal();
            O = cayley(perturbation * 0.5 * (K - K.transpose()));
            break;
        }
        case InitKind::Haar: O = haar_orthogonal(d, rng); break;
    }
    // even restarts in SO(d), odd ones in the other component
    const double want = (restart % 2 == 0) ? 1.0 : -1.0;
    if (O.determinant() * want < 0) O.col(0) *= -1.0;
    return O;
}

OptResult cg_run(const LocalTerm& h, const RMat& O0, const OptimizerConfig& cfg) {
    cfg.validate();
    h.validate();
    const EntryPenalty g = penalty_for(cfg.p);
    const int d = h.d;
    const int period = std::max(1, d * (d - 1) / 2);
    const double c1 = 1e-4;

    OptResult res;
    RMat O = polar_orthogonal(O0);
    double F = objective_at(h, O, g, cfg.alpha);
    res.trace.push_back(F);
    RMat W_prev, A_prev;
    double t_prev = 0;
    bool force_sd = true;
    int since_restart = 0;

    for (int it = 0; it < cfg.max_iters; ++it) {
        RMat G = objective_gradient(h, O, g, cfg.alpha);
        RMat A = 0.5 * (G * O.transpose() - O * G.transpose());
        const double na = A.norm();
        if (na <= cfg.grad_tol) {
            res.converged = true;
            break;
        }
        RMat W;
        if (force_sd || since_restart >= period) {
            W = -A;
            since_restart = 0;
        } else {
            double beta = std::max(0.0, (A.cwiseProduct(A - A_prev)).sum() / A_prev.squaredNorm());
            W = -A + beta * W_prev;
        }
        double slope = A.cwiseProduct(W).sum();
        if (!(slope < 0)) {
            W = -A;
            slope = -na * na;
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            const double nw = W.norm();
            double t = t_prev > 0 ? 2 * t_prev : 0.5 / nw;
            t = std::min(t, 2.0 / nw);
            for (int k = 0; k < 60; ++k, t *= 0.5) {
                RMat On = polar_orthogonal(cayley(t * W) * O);
                double Fn = objective_at(h, On, g, cfg.alpha);
                if (Fn <= F + c1 * t * slope) {
                    O = On;
                    F = Fn;
                    t_prev = t;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                ++res.line_search_failures;
                if (attempt == 0 && !force_sd && since_restart != 0) {
                    W = -A;
                    slope = -na * na;
                    t_prev = 0;
                } else {
                    break;
                }
            }
        }
        if (!accepted) break;  // no decrease along steepest descent: numerically stationary
        res.trace.push_back(F);
        ++res.iterations;
        A_prev = A;
        W_prev = W;
        force_sd = false;
        ++since_restart;
    }
    res.O = O;
    res.nu1 = effective_nu1(conjugate_local(h, O));
    return res;
}

namespace {
bool better(const OptResult& a, const OptResult& b) { return a.nu1 < b.nu1; }
}  // namespace

OptResult cg_minimize(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng) {
    cfg.validate();
    OptResult best;
    best.nu1 = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng sub = rng.split(std::uint64_t(r));
        auto res = cg_run(h, initial_point(h.d, cfg.init, cfg.perturbation, r, sub), cfg);
        if (better(res, best)) best = std::move(res);
    }
    return best;
}

OptResult hybrid_minimize(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng) {
    cfg.validate();
    OptimizerConfig sq = cfg, sm = cfg;
    sq.p = 2;
    sm.p = 1;
    OptResult best;
    best.nu1 = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng sub = rng.split(std::uint64_t(r));
        RMat O0 = initial_point(h.d, cfg.init, cfg.perturbation, r, sub);
        auto pre = cg_run(h, O0, sq);
        auto post = cg_run(h, pre.O, sm);
        auto direct = cg_run(h, O0, sm);
        for (auto* c : {&pre, &post, &direct})
            if (better(*c, best)) best = std::move(*c);
    }
    return best;
}

HiddenInstance hidden_stoquastic(int d, Rng& rng) {
    const int D = d * d;
    RMat Q = haar_orthogonal(D, rng);
    RVec lam(D);
    for (int i = 0; i < D; ++i) lam[i] = rng.uniform(-1.0, 1.0);
    RMat h = Q * lam.asDiagonal() * Q.transpose();
    h = 0.5 * (h + h.transpose());
    h -= positive_offdiagonal(h);
    HiddenInstance inst;
    inst.hidden = haar_orthogonal(d, rng);
    inst.term = conjugate_local({d, h}, inst.hidden);
    inst.term.h = 0.5 * (inst.term.h + inst.term.h.transpose());
    return inst;
}

LocalTerm hidden_stoquastic_term(int d, Rng& rng) { return hidden_stoquastic(d, rng).term; }

namespace {

// S_p . S_q on 4 spins; bit 0,1 = right dimer spins 1,2; bit 2,3 = left dimer spins 1,2
RMat spin_dot(int p, int q, double s2) {
    RMat M = RMat::Zero(16, 16);
    for (int x = 0; x < 16; ++x) {
        const double sp = bit(x, p) ? -1.0 : 1.0, sq = bit(x, q) ? -1.0 : 1.0;
        const int y = x ^ (1 << p) ^ (1 << q);
        M(y, x) += s2 * (1.0 - sp * sq);  // XX + YY
        M(x, x) += s2 * sp * sq;          // ZZ
    }
    return M;
}

constexpr int kR1 = 0, kR2 = 1, kL1 = 2, kL2 = 3;

void check_nonnegative(std::initializer_list<double> js) {
    for (double j : js)
        if (j < 0) throw ConfigError("couplings must be nonnegative");
}

}  // namespace

LocalTerm jmodel_term(double J0, double J1, double J2, double J3, bool half_spin) {
    check_nonnegative({J0, J1, J2, J3});
    const double s2 = half_spin ? 0.25 : 1.0;
    RMat h = J0 * spin_dot(kL1, kR1, s2) + J1 * spin_dot(kL2, kR2, s2) + J2 * spin_dot(kL1, kL2, s2) +
             J3 * spin_dot(kR1, kL2, s2);
    return {4, h};
}

LocalTerm ladder_term(double Jpar, double Jperp, double Jx, bool half_spin) {
    check_nonnegative({Jpar, Jperp, Jx});
    const double s2 = half_spin ? 0.25 : 1.0;
    RMat h = Jpar * (spin_dot(kL1, kR1, s2) + spin_dot(kL2, kR2, s2)) + Jperp * spin_dot(kL1, kL2, s2) +
             Jx * (spin_dot(kL1, kR2, s2) + spin_dot(kR1, kL2, s2));
    return {4, h};
}

SignPair sign_after_easing(const LocalTerm& term, const RMat& O, int n_sites, double beta, int m) {
    auto before = chain_hamiltonian(term.h, term.d, n_sites, true);
    auto after = chain_hamiltonian(conjugate_local(term, O).h, term.d, n_sites, true);
    return {average_sign_exact(before, beta, m), average_sign_exact(after, beta, m)};
}

int Graph::max_degree() const {
    std::vector<int> deg(v, 0);
    for (auto [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

void Graph::validate() const {
    if (v < 0) throw ConfigError("graph: v >= 0");
    std::vector<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= v || b >= v || a == b) throw ConfigError("graph: invalid edge");
        auto e = std::minmax(a, b);
        if (std::find(seen.begin(), seen.end(), std::pair<int, int>(e)) != seen.end())
            throw ConfigError("graph: duplicate edge");
        seen.emplace_back(e);
    }
}

GadgetInstance maxcut_gadget(const Graph& g, GadgetMode mode) {
    g.validate();
    GadgetInstance inst;
    inst.graph = g;
    const int e = int(g.edges.size());
    const int deg = g.max_degree();
    auto& s = inst.spec;
    s.n = g.v + e;
    // gadget graph: each original vertex meets its edges and their ancillas, ancillas have degree 2
    const int deg_prime = e ? std::max(2, 2 * deg) : 0;
    inst.C = mode == GadgetMode::Clifford ? 4.0 * deg : double(2 * deg_prime) * double(2 * deg_prime);
    s.alpha.assign(s.n, 0.0);
    s.gamma.assign(s.n, 0.0);
    for (int k = 0; k < e; ++k) {
        auto [i, j] = std::minmax(g.edges[k].first, g.edges[k].second);
        const int a = g.v + k;
        TwoLocalEdge ij;
        ij.i = i;
        ij.j = j;
        ij.a = 1.0;
        ij.c = inst.C;
        TwoLocalEdge ia;
        ia.i = i;
        ia.j = a;
        ia.c = -inst.C;
        TwoLocalEdge ja;
        ja.i = j;
        ja.j = a;
        ja.c = -inst.C;
        s.edges.push_back(ij);
        s.edges.push_back(ia);
        s.edges.push_back(ja);
    }
    return inst;
}

int maxcut(const Graph& g) {
    g.validate();
    if (g.v > 30) throw CapExceeded("maxcut: too many vertices");
    int best = 0;
    for (std::uint64_t s = 0; s < (1ULL << g.v); ++s) {
        int cut = 0;
        for (auto [a, b] : g.edges) cut += bit(s, a) != bit(s, b);
        best = std::max(best, cut);
    }
    return best;
}

namespace {

enum class P { X, Z };
struct Image {
    P type;
    double sign;
};

}  // namespace

TwoLocalSpec clifford_conjugate(const TwoLocalSpec& spec, const std::vector<int>& w, const std::vector<int>& x,
                                const std::vector<int>& z) {
    spec.validate();
    const int n = spec.n;
    if (int(w.size()) != n || int(x.size()) != n || int(z.size()) != n)
        throw ConfigError("clifford: w, x, z need one entry per qubit");
    auto img = [&](int q, P p) -> Image {
        if (p == P::X) return {w[q] ? P::Z : P::X, z[q] ? -1.0 : 1.0};
        return {w[q] ? P::X : P::Z, x[q] ? -1.0 : 1.0};
    };
    auto ysign = [&](int q) { return ((x[q] + z[q]) % 2 ? -1.0 : 1.0) * (w[q] ? -1.0 : 1.0); };

    TwoLocalSpec out;
    out.n = n;
    out.alpha.assign(n, 0.0);
    out.gamma.assign(n, 0.0);
    for (const auto& e : spec.edges) {
        TwoLocalEdge o;
        o.i = e.i;
        o.j = e.j;
        auto add = [&](P pi, P pj, double coef) {
            if (coef == 0) return;
            Image a = img(e.i, pi), b = img(e.j, pj);
            double v = coef * a.sign * b.sign;
            if (a.type == P::X && b.type == P::X) o.a += v;
            else if (a.type == P::Z && b.type == P::Z) o.c += v;
            else if (a.type == P::X) o.xij += v;
            else o.xji += v;
        };
        add(P::X, P::X, e.a);
        add(P::Z, P::Z, e.c);
        add(P::X, P::Z, e.xij);
        add(P::Z, P::X, e.xji);
        o.b = e.b * ysign(e.i) * ysign(e.j);
        out.edges.push_back(o);
    }
    for (int q = 0; q < n; ++q) {
        auto put = [&](P p, double coef) {
            if (coef == 0) return;
            Image a = img(q, p);
            (a.type == P::X ? out.alpha[q] : out.gamma[q]) += a.sign * coef;
        };
        put(P::X, spec.alpha.empty() ? 0.0 : spec.alpha[q]);
        put(P::Z, spec.gamma.empty() ? 0.0 : spec.gamma[q]);
    }
    return out;
}

CliffordOptimum brute_force_clifford_optimum(const GadgetInstance& inst, CliffordSearch mode) {
    const int n = inst.spec.n;
    const int cap = mode == CliffordSearch::ZFlip ? 20 : 8;
    if (n > cap) throw CapExceeded("clifford brute force: too many qubits");
    CliffordOptimum best;
    best.nu1 = std::numeric_limits<double>::infinity();
    const std::uint64_t total = mode == CliffordSearch::ZFlip ? (1ULL << n) : (1ULL << (3 * n));
    std::vector<int> w(n), x(n), z(n);
    for (std::uint64_t c = 0; c < total; ++c) {
        for (int q = 0; q < n; ++q) {
            z[q] = bit(c, q);
            x[q] = mode == CliffordSearch::Full ? bit(c, n + q) : 0;
            w[q] = mode == CliffordSearch::Full ? bit(c, 2 * n + q) : 0;
        }
        double nu = nu1_two_local_closed(clifford_conjugate(inst.spec, w, x, z));
        if (nu < best.nu1 - 1e-12) {
            best.nu1 = nu;
            best.w = w;
            best.x = x;
            best.z = z;
        }
    }
    return best;
}

double xz_lower_bound(const std::vector<double>& x) {
    if (x.empty()) throw ConfigError("xz bound: k >= 1");
    double mx = 0;
    for (double v : x) mx = std::max(mx, std::fabs(v));
    return mx * std::pow(2.0, double(x.size()) - 1);
}

double xz_enumeration(const std::vector<double>& x) { return std::ldexp(xz_sum_exact(0.0, x), int(x.size())); }

std::vector<Graph> all_graphs(int v) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j) pairs.emplace_back(i, j);
    std::vector<Graph> out;
    for (std::uint64_t s = 0; s < (1ULL << pairs.size()); ++s) {
        Graph g;
        g.v = v;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (bit(s, int(k))) g.edges.push_back(pairs[k]);
        out.push_back(g);
    }
    return out;
}

}  // namespace qrs
