#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qrs/core.hpp"

namespace qrs {

// Qubit q is bit q of the basis index (little-endian).
inline int default_qubit_cap = 24;

enum class GateKind { H, X, Z, T, CNOT, CZ, CCZ, RZ, GlobalXRot, GlobalMS, Unitary2 };

struct Gate {
    GateKind kind;
    std::array<int, 3> q{-1, -1, -1};
    double angle = 0.0;  // RZ(theta) = exp(-i theta Z/2); Global*(phi) = exp(-i phi sum ...)
    int unitary = -1;    // index into Circuit::unitaries for Unitary2

    static Gate h(int a) { return {GateKind::H, {a, -1, -1}}; }
    static Gate x(int a) { return {GateKind::X, {a, -1, -1}}; }
    static Gate z(int a) { return {GateKind::Z, {a, -1, -1}}; }
    static Gate t(int a) { return {GateKind::T, {a, -1, -1}}; }
    static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t, -1}}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, {a, b, -1}}; }
    static Gate ccz(int a, int b, int c) { return {GateKind::CCZ, {a, b, c}}; }
    static Gate rz(int a, double theta) { return {GateKind::RZ, {a, -1, -1}, theta}; }
    static Gate global_xrot(double phi) { return {GateKind::GlobalXRot, {-1, -1, -1}, phi}; }
    static Gate global_ms(double phi) { return {GateKind::GlobalMS, {-1, -1, -1}, phi}; }

    int arity() const;
};

std::string gate_name(GateKind k);

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<Eigen::Matrix4cd> unitaries;  // payloads of Unitary2 gates; the first qubit is the low bit

    explicit Circuit(int n = 0) : n_qubits(n) {}
    Circuit& add(const Gate& g) {
        gates.push_back(g);
        return *this;
    }
    Circuit& add_unitary2(int a, int b, const Eigen::Matrix4cd& u);
    Circuit& h_layer();
    void validate() const;
};

struct StateVector {
    int n_qubits = 0;
    CVec amplitudes;

    static StateVector zero(int n);
    double norm() const { return amplitudes.norm(); }
};

using Probs = std::vector<double>;

StateVector simulate(const Circuit& c, int cap = default_qubit_cap);
void apply_gate(StateVector& s, const Gate& g, const Circuit& owner);
// dense unitary of a single gate embedded in n qubits (oracle use only)
CMat gate_unitary(const Gate& g, const Circuit& owner);
CMat circuit_unitary(const Circuit& c);

Probs born_distribution(const StateVector& s);

struct IQPWeights {
    int n = 0;
    RMat W;  // symmetric; w_ii on the diagonal
    std::optional<std::vector<double>> angle_set;

    void validate() const;
};

struct DegreeThreePolynomial {
    int n = 0;
    std::set<std::array<int, 3>> alpha;
    std::set<std::array<int, 2>> beta;
    std::set<int> gamma;

    int evaluate(std::uint64_t x) const;
    void validate() const;
};

struct ClusterScheme {
    int rows = 0;
    int cols = 0;
    std::vector<double> beta;  // row-major, qubit r*cols + c

    int qubit(int r, int c) const { return r * cols + c; }
    int size() const { return rows * cols; }
    std::vector<std::pair<int, int>> edges() const;
    void validate() const;
};

// C_W = H^n exp(i(sum_{i<j} w_ij Z_i Z_j + sum_i w_ii Z_i)) H^n
Circuit iqp_circuit(const IQPWeights& w);
// H-layer, RZ(beta_i), CZ on lattice edges, H-layer
Circuit cluster_circuit(const ClusterScheme& s);
// logical n-qubit circuit of an n x m scheme: |+>^n, then per column RZ(beta), CZ chain, H
Circuit cluster_logical_circuit(int n, int m, const std::vector<double>& beta);
Circuit ngap_circuit(const DegreeThreePolynomial& f);

double ngap(const DegreeThreePolynomial& f);
cplx ising_partition_function(const IQPWeights& w);

// discrete angle set {0, pi/4, pi, 5pi/4} used for the cluster scheme numerics
std::vector<double> cluster_angle_set();
ClusterScheme random_cluster_scheme(int rows, int cols, Rng& rng);
std::vector<double> random_angles(int count, const std::vector<double>& set, Rng& rng);

Circuit random_parallel_circuit(int n, int depth, Rng& rng);

// Ion-trap prescription on the symbolic weight matrix.
// z[l-1] is the flip pattern z(l) of the prescription, l = 1..k+1.
std::vector<double> iontrap_angle_set(int k);
IQPWeights iontrap_weights_from_flips(int n, int k, const std::vector<std::vector<int>>& z);
IQPWeights iontrap_weights(int n, int k, int repetitions, Rng& rng);
// gate-level version of the same prescription (global X rotations, MS gates, Z flips)
Circuit iontrap_circuit(int n, int k, const std::vector<std::vector<int>>& z);

double wrap_angle(double a);  // into [0, 2pi)

}  // namespace qrs
