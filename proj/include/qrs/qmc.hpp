#pragma once

#include <vector>

#include "qrs/core.hpp"

namespace qrs {

struct RealHamiltonian {
    RMat matrix;
    int n_qubits = -1;  // -1 when there is no qubit structure

    RealHamiltonian() = default;
    explicit RealHamiltonian(RMat m, int n = -1) : matrix(std::move(m)), n_qubits(n) {}
    Eigen::Index dim() const { return matrix.rows(); }
    void validate() const;
};

struct TransferMatrix {
    RMat T;
    double beta = 0.0;
    int m = 1;
};

TransferMatrix transfer_matrix(const RealHamiltonian& H, double beta, int m);
// product of T(l_i | l_{i+1}) over consecutive entries of path
double path_amplitude(const RMat& T, const std::vector<Eigen::Index>& path);

inline int dense_dimension_cap = 1 << 12;

// Tr[T^m] / Tr[|T|^m], entrywise absolute value
double average_sign_exact(const RealHamiltonian& H, double beta, int m);
double average_sign_transfer(const RMat& T, int m);

struct ChainConfig {
    std::uint64_t sweeps = 20000;  // one sweep = m single-slice proposals
    std::uint64_t burn_in = 2000;
    int batches = 50;
};

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

Estimate average_sign_mc(const RealHamiltonian& H, double beta, int m, const ChainConfig& cfg, Rng& rng);

enum class ExpectationMode { Exact, Transfer, MonteCarlo };
// O must be diagonal in the computational basis
Estimate thermal_expectation(const RealHamiltonian& H, const RMat& O, double beta, int m, ExpectationMode mode,
                             Rng& rng, const ChainConfig& cfg = {});

// ceil(1/(s^2 eps^2)); s == 0 gives the max value as an infeasibility sentinel
std::uint64_t sample_requirement(double avg_sign, double eps);

// D^-1 ||H_-||_p, counting off-diagonal entries > 1e-12
double nonstoq(const RealHamiltonian& H, double p = 1.0);
RMat positive_offdiagonal(const RMat& H);

struct TwoLocalEdge {
    int i = 0, j = 0;  // i < j
    double a = 0, b = 0, c = 0;  // XX, YY, ZZ
    double xij = 0;    // X_i Z_j
    double xji = 0;    // Z_i X_j
};

struct TwoLocalSpec {
    int n = 0;
    std::vector<TwoLocalEdge> edges;
    std::vector<double> alpha;  // X fields
    std::vector<double> gamma;  // Z fields

    void validate() const;
};

RealHamiltonian dense_hamiltonian(const TwoLocalSpec& spec, int cap = 14);
double nu1_two_local_closed(const TwoLocalSpec& spec);
// 2^-k sum over sign patterns of max{alpha + sum_j (-1)^l_j x_j, 0}
double xz_sum_exact(double alpha, const std::vector<double>& x);
std::uint64_t nu1_xz_samples(const std::vector<double>& x, double eps, double delta);
double nu1_xz_mc(double alpha, const std::vector<double>& x, double eps, double delta, Rng& rng);

RealHamiltonian example_10_1(int n);
TransferMatrix example_10_2(double a, double b, int m, double beta);
double example_10_2_bound(double a, double b, int m);
RealHamiltonian h_alpha(const RealHamiltonian& H, double alpha);

// sum_i T_i(h) on n sites of dimension d. Site k is the digit of weight d^k, and the two-site
// row index of h is a*d + b with a on site i and b on site i+1.
RealHamiltonian chain_hamiltonian(const RMat& h, int d, int n, bool periodic);
// symmetric matrix with iid standard normal entries above the diagonal (and on it)
RMat gaussian_symmetric(int dim, Rng& rng);

}  // namespace qrs
