#include "qrs/circuit.hpp"

#include <cmath>
#include <string>

namespace qrs {

namespace {

void apply_1q(CVec& a, int q, const Eigen::Matrix2cd& m) {
    const std::uint64_t dim = a.size();
    const std::uint64_t stride = 1ULL << q;
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
        for (std::uint64_t i = base; i < base + stride; ++i) {
            cplx a0 = a[i], a1 = a[i + stride];
            a[i] = m(0, 0) * a0 + m(0, 1) * a1;
            a[i + stride] = m(1, 0) * a0 + m(1, 1) * a1;
        }
    }
}

void apply_h(CVec& a, int q) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::uint64_t dim = a.size();
    const std::uint64_t stride = 1ULL << q;
    for (std::uint64_t base = 0; base < dim; base += 2 * stride)
        for (std::uint64_t i = base; i < base + stride; ++i) {
            cplx a0 = a[i], a1 = a[i + stride];
            a[i] = r * (a0 + a1);
            a[i + stride] = r * (a0 - a1);
        }
}

void apply_all_h(CVec& a, int n) {
    for (int q = 0; q < n; ++q) apply_h(a, q);
}

}  // namespace

int Gate::arity() const {
    switch (kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Z:
        case GateKind::T:
        case GateKind::RZ: return 1;
        case GateKind::CNOT:
        case GateKind::CZ:
        case GateKind::Unitary2: return 2;
        case GateKind::CCZ: return 3;
        default: return 0;
    }
}

std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::T: return "T";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::CCZ: return "CCZ";
        case GateKind::RZ: return "RZ";
        case GateKind::GlobalXRot: return "GXR";
        case GateKind::GlobalMS: return "GMS";
        case GateKind::Unitary2: return "U2";
    }
    return "?";
}

Circuit& Circuit::add_unitary2(int a, int b, const Eigen::Matrix4cd& u) {
    unitaries.push_back(u);
    Gate g{GateKind::Unitary2, {a, b, -1}};
    g.unitary = int(unitaries.size()) - 1;
    gates.push_back(g);
    return *this;
}

Circuit& Circuit::h_layer() {
    for (int q = 0; q < n_qubits; ++q) add(Gate::h(q));
    return *this;
}

void Circuit::validate() const {
    if (n_qubits < 0) throw ConfigError("circuit: negative qubit count");
    for (const auto& g : gates) {
        int k = g.arity();
        for (int i = 0; i < k; ++i) {
            if (g.q[i] < 0 || g.q[i] >= n_qubits)
                throw ConfigError("circuit: gate " + gate_name(g.kind) + " index out of range");
            for (int j = 0; j < i; ++j)
                if (g.q[i] == g.q[j]) throw ConfigError("circuit: repeated qubit in " + gate_name(g.kind));
        }
        if (g.kind == GateKind::Unitary2 && (g.unitary < 0 || g.unitary >= int(unitaries.size())))
            throw ConfigError("circuit: dangling two-qubit unitary");
    }
}

StateVector StateVector::zero(int n) {
    StateVector s;
    s.n_qubits = n;
    s.amplitudes = CVec::Zero(std::int64_t(1) << n);
    s.amplitudes[0] = 1.0;
    return s;
}

void apply_gate(StateVector& s, const Gate& g, const Circuit& owner) {
    CVec& a = s.amplitudes;
    const std::uint64_t dim = a.size();
    const int n = s.n_qubits;
    switch (g.kind) {
        case GateKind::H: apply_h(a, g.q[0]); break;
        case GateKind::X: {
            std::uint64_t m = 1ULL << g.q[0];
            for (std::uint64_t i = 0; i < dim; ++i)
                if (!(i & m)) std::swap(a[i], a[i | m]);
            break;
        }
        case GateKind::Z: {
            std::uint64_t m = 1ULL << g.q[0];
            for (std::uint64_t i = 0; i < dim; ++i)
                if (i & m) a[i] = -a[i];
            break;
        }
        case GateKind::T: {
            std::uint64_t m = 1ULL << g.q[0];
            cplx ph = std::polar(1.0, kPi / 4);
            for (std::uint64_t i = 0; i < dim; ++i)
                if (i & m) a[i] *= ph;
            break;
        }
        case GateKind::RZ: {
            std::uint64_t m = 1ULL << g.q[0];
            cplx p0 = std::polar(1.0, -g.angle / 2), p1 = std::polar(1.0, g.angle / 2);
            for (std::uint64_t i = 0; i < dim; ++i) a[i] *= (i & m) ? p1 : p0;
            break;
        }
        case GateKind::CNOT: {
            std::uint64_t c = 1ULL << g.q[0], t = 1ULL << g.q[1];
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & c) && !(i & t)) std::swap(a[i], a[i | t]);
            break;
        }
        case GateKind::CZ: {
            std::uint64_t m = (1ULL << g.q[0]) | (1ULL << g.q[1]);
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & m) == m) a[i] = -a[i];
            break;
        }
        case GateKind::CCZ: {
            std::uint64_t m = (1ULL << g.q[0]) | (1ULL << g.q[1]) | (1ULL << g.q[2]);
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & m) == m) a[i] = -a[i];
            break;
        }
        case GateKind::GlobalXRot: {
            // exp(-i phi X) on every qubit
            Eigen::Matrix2cd m;
            double c = std::cos(g.angle), sn = std::sin(g.angle);
            m << c, cplx(0, -sn), cplx(0, -sn), c;
            for (int q = 0; q < n; ++q) apply_1q(a, q, m);
            break;
        }
        case GateKind::GlobalMS: {
            // diagonal in the X basis: sum_{i<j} x_i x_j = (S^2 - n)/2 with S the total +-1 spin
            apply_all_h(a, n);
            for (std::uint64_t i = 0; i < dim; ++i) {
                int S = n - 2 * popcount(i);
                double e = 0.5 * (double(S) * S - n);
                a[i] *= std::polar(1.0, -g.angle * e);
            }
            apply_all_h(a, n);
            break;
        }
        case GateKind::Unitary2: {
            const Eigen::Matrix4cd& u = owner.unitaries[g.unitary];
            std::uint64_t m0 = 1ULL << g.q[0], m1 = 1ULL << g.q[1];
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & (m0 | m1)) continue;
                std::uint64_t idx[4] = {i, i | m0, i | m1, i | m0 | m1};
                cplx v[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
                for (int r = 0; r < 4; ++r)
                    a[idx[r]] = u(r, 0) * v[0] + u(r, 1) * v[1] + u(r, 2) * v[2] + u(r, 3) * v[3];
            }
            break;
        }
    }
}

StateVector simulate(const Circuit& c, int cap) {
    if (c.n_qubits > cap)
        throw CapExceeded("simulate: " + std::to_string(c.n_qubits) + " qubits exceeds cap " +
                          std::to_string(cap));
    c.validate();
    StateVector s = StateVector::zero(c.n_qubits);
    for (const auto& g : c.gates) apply_gate(s, g, c);
    return s;
}

CMat gate_unitary(const Gate& g, const Circuit& owner) {
    const int n = owner.n_qubits;
    const std::int64_t dim = std::int64_t(1) << n;
    CMat U(dim, dim);
    for (std::int64_t k = 0; k < dim; ++k) {
        StateVector s;
        s.n_qubits = n;
        s.amplitudes = CVec::Zero(dim);
        s.amplitudes[k] = 1.0;
        apply_gate(s, g, owner);
        U.col(k) = s.amplitudes;
    }
    return U;
}

CMat circuit_unitary(const Circuit& c) {
    const std::int64_t dim = std::int64_t(1) << c.n_qubits;
    CMat U = CMat::Identity(dim, dim);
    for (const auto& g : c.gates) U = gate_unitary(g, c) * U;
    return U;
}

Probs born_distribution(const StateVector& s) {
    Probs p(s.amplitudes.size());
    for (std::int64_t i = 0; i < s.amplitudes.size(); ++i) p[i] = std::norm(s.amplitudes[i]);
    return p;
}

void IQPWeights::validate() const {
    if (W.rows() != n || W.cols() != n) throw ConfigError("iqp weights: shape mismatch");
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ConfigError("iqp weights: not symmetric");
    if (angle_set) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                bool ok = false;
                for (double a : *angle_set) {
                    double d = std::fabs(wrap_angle(W(i, j)) - wrap_angle(a));
                    if (d < 1e-9 || std::fabs(d - 2 * kPi) < 1e-9) ok = true;
                }
                if (!ok) throw ConfigError("iqp weights: entry outside angle set");
            }
    }
}

int DegreeThreePolynomial::evaluate(std::uint64_t x) const {
    int v = 0;
    for (auto& t : alpha) v ^= bit(x, t[0]) & bit(x, t[1]) & bit(x, t[2]);
    for (auto& t : beta) v ^= bit(x, t[0]) & bit(x, t[1]);
    for (int i : gamma) v ^= bit(x, i);
    return v;
}

void DegreeThreePolynomial::validate() const {
    auto chk = [&](int i) {
        if (i < 0 || i >= n) throw ConfigError("polynomial: index out of range");
    };
    for (auto& t : alpha) {
        for (int i : t) chk(i);
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw ConfigError("polynomial: repeated index");
    }
    for (auto& t : beta) {
        for (int i : t) chk(i);
        if (t[0] == t[1]) throw ConfigError("polynomial: repeated index");
    }
    for (int i : gamma) chk(i);
}

std::vector<std::pair<int, int>> ClusterScheme::edges() const {
    std::vector<std::pair<int, int>> e;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(qubit(r, c), qubit(r, c + 1));
            if (r + 1 < rows) e.emplace_back(qubit(r, c), qubit(r + 1, c));
        }
    return e;
}

void ClusterScheme::validate() const {
    if (rows < 1 || cols < 1) throw ConfigError("cluster scheme: empty lattice");
    if (int(beta.size()) != rows * cols) throw ConfigError("cluster scheme: need rows*cols angles");
}

Circuit iqp_circuit(const IQPWeights& w) {
    w.validate();
    Circuit c(w.n);
    c.h_layer();
    for (int i = 0; i < w.n; ++i)
        for (int j = i + 1; j < w.n; ++j) {
            double a = w.W(i, j);
            if (a == 0.0) continue;
            c.add(Gate::cnot(i, j)).add(Gate::rz(j, -2 * a)).add(Gate::cnot(i, j));
        }
    for (int i = 0; i < w.n; ++i)
        if (w.W(i, i) != 0.0) c.add(Gate::rz(i, -2 * w.W(i, i)));
    c.h_layer();
    return c;
}

Circuit cluster_circuit(const ClusterScheme& s) {
    s.validate();
    Circuit c(s.size());
    c.h_layer();
    for (int q = 0; q < s.size(); ++q)
        if (s.beta[q] != 0.0) c.add(Gate::rz(q, s.beta[q]));
    for (auto [a, b] : s.edges()) c.add(Gate::cz(a, b));
    c.h_layer();
    return c;
}

Circuit cluster_logical_circuit(int n, int m, const std::vector<double>& beta) {
    if (int(beta.size()) != n * m) throw ConfigError("logical circuit: need n*m angles");
    Circuit c(n);
    c.h_layer();
    for (int col = 0; col < m; ++col) {
        for (int r = 0; r < n; ++r)
            if (beta[r * m + col] != 0.0) c.add(Gate::rz(r, beta[r * m + col]));
        for (int r = 0; r + 1 < n; ++r) c.add(Gate::cz(r, r + 1));
        c.h_layer();
    }
    return c;
}

Circuit ngap_circuit(const DegreeThreePolynomial& f) {
    f.validate();
    Circuit c(f.n);
    c.h_layer();
    for (auto& t : f.alpha) c.add(Gate::ccz(t[0], t[1], t[2]));
    for (auto& t : f.beta) c.add(Gate::cz(t[0], t[1]));
    for (int i : f.gamma) c.add(Gate::z(i));
    c.h_layer();
    return c;
}

double ngap(const DegreeThreePolynomial& f) {
    f.validate();
    if (f.n > default_qubit_cap) throw CapExceeded("ngap: too many variables");
    const std::uint64_t dim = 1ULL << f.n;
    std::int64_t gap = 0;
    for (std::uint64_t x = 0; x < dim; ++x) gap += f.evaluate(x) ? -1 : 1;
    return double(gap) / double(dim);
}

cplx ising_partition_function(const IQPWeights& w) {
    w.validate();
    if (w.n > default_qubit_cap) throw CapExceeded("partition function: too many spins");
    const std::uint64_t dim = 1ULL << w.n;
    cplx Z = 0;
    for (std::uint64_t x = 0; x < dim; ++x) {
        double e = 0;
        for (int i = 0; i < w.n; ++i) {
            int zi = bit(x, i) ? -1 : 1;
            e += w.W(i, i) * zi;
            for (int j = i + 1; j < w.n; ++j) e += w.W(i, j) * zi * (bit(x, j) ? -1 : 1);
        }
        Z += std::polar(1.0, e);
    }
    return Z;
}

std::vector<double> cluster_angle_set() { return {0.0, kPi / 4, kPi, 5 * kPi / 4}; }

std::vector<double> random_angles(int count, const std::vector<double>& set, Rng& rng) {
    std::vector<double> b(count);
    for (auto& x : b) x = set[rng.below(set.size())];
    return b;
}

ClusterScheme random_cluster_scheme(int rows, int cols, Rng& rng) {
    ClusterScheme s{rows, cols, random_angles(rows * cols, cluster_angle_set(), rng)};
    return s;
}

namespace {

Eigen::Matrix4cd haar4(Rng& rng) {
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
    Eigen::Matrix4cd Q = qr.householderQ();
    Eigen::Matrix4cd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 4; ++i) {
        cplx d = R(i, i);
        Q.col(i) *= d / std::abs(d);
    }
    return Q;
}

}  // namespace

Circuit random_parallel_circuit(int n, int depth, Rng& rng) {
    if (n % 2 != 0) throw ConfigError("random_parallel_circuit: n must be even");
    Circuit c(n);
    for (int d = 0; d < depth; ++d) {
        int start = rng.coin() ? 1 : 0;
        for (int a = start; a + 1 < n; a += 2) c.add_unitary2(a, a + 1, haar4(rng));
    }
    return c;
}

double wrap_angle(double a) {
    double r = std::fmod(a, 2 * kPi);
    if (r < 0) r += 2 * kPi;
    if (r >= 2 * kPi - 1e-12) r = 0;
    return r;
}

std::vector<double> iontrap_angle_set(int k) {
    std::vector<double> s;
    const int steps = 1 << (k + 1);  // multiples of pi/2^k in [0, 2pi)
    for (int i = 0; i < steps; ++i) s.push_back(i * kPi / double(1 << k));
    return s;
}

IQPWeights iontrap_weights_from_flips(int n, int k, const std::vector<std::vector<int>>& z) {
    if (k < 1) throw ConfigError("iontrap: k >= 1 required");
    if (int(z.size()) != k + 1) throw ConfigError("iontrap: need k+1 flip patterns");
    RMat W = RMat::Zero(n, n);
    // time order: SM(pi/2^{k+1}), Z^{z(k+1)}, SM(pi/2^k), ..., SM(pi/2), Z^{z(1)}, SM(pi/2^{k+1});
    // a Z flip conjugates the accumulated exponent, SM adds its angle to every weight
    for (int l = k + 1; l >= 1; --l) {
        W.array() += kPi / double(1 << l);
        const auto& zl = z[l - 1];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int par = (i == j) ? zl[i] : (zl[i] ^ zl[j]);
                if (par) W(i, j) = -W(i, j);
            }
    }
    W.array() += kPi / double(1 << (k + 1));
    IQPWeights w;
    w.n = n;
    w.W = W.unaryExpr([](double a) { return wrap_angle(a); });
    w.angle_set = iontrap_angle_set(k);
    return w;
}

IQPWeights iontrap_weights(int n, int k, int repetitions, Rng& rng) {
    if (repetitions < 1) throw ConfigError("iontrap: repetitions >= 1");
    RMat acc = RMat::Zero(n, n);
    for (int r = 0; r < repetitions; ++r) {
        std::vector<std::vector<int>> z(k + 1, std::vector<int>(n));
        for (auto& row : z)
            for (auto& b : row) b = rng.coin() ? 1 : 0;
        acc += iontrap_weights_from_flips(n, k, z).W;
    }
    IQPWeights w;
    w.n = n;
    w.W = acc.unaryExpr([](double a) { return wrap_angle(a); });
    w.angle_set = iontrap_angle_set(k);
    return w;
}

Circuit iontrap_circuit(int n, int k, const std::vector<std::vector<int>>& z) {
    // the symbolic weights follow exp(+i phi ...); the hardware gates are exp(-i phi ...)
    auto sm = [&](Circuit& c, double phi) {
        c.add(Gate::global_xrot(-phi)).add(Gate::global_ms(-phi));
    };
    Circuit c(n);
    for (int l = k + 1; l >= 1; --l) {
        sm(c, kPi / double(1 << l));
        for (int i = 0; i < n; ++i)
            if (z[l - 1][i]) c.add(Gate::z(i));
    }
    sm(c, kPi / double(1 << (k + 1)));
    return c;
}

}  // namespace qrs
