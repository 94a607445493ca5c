#pragma once

#include <functional>
#include <vector>

#include "qrs/circuit.hpp"

namespace qrs {

// Single-site factors. Zb(beta) = cos(beta) Z - sin(beta) Y, Yb(beta) = cos(beta) Y + sin(beta) Z;
// beta = 0 gives plain Z / Y.
enum class Factor { I, X, Zb, Yb };

struct SiteFactor {
    Factor kind = Factor::I;
    double beta = 0.0;
};

struct PauliProduct {
    double coefficient = 1.0;
    std::vector<SiteFactor> sites;

    explicit PauliProduct(int n = 0) : sites(n) {}
    int n_qubits() const { return int(sites.size()); }
    int support() const;
    bool is_identity() const { return support() == 0; }
};

Eigen::Matrix2cd factor_matrix(const SiteFactor& f);
// applies the operator to each column of M (rows indexed by basis states)
void apply_product(const PauliProduct& p, CMat& M);
CMat product_matrix(const PauliProduct& p);
double expectation(const PauliProduct& p, const CMat& rho);
double expectation(const PauliProduct& p, const CVec& psi);

// H = offset + sum(terms). e0, gap and norm_bound refer to the full operator.
struct LocalHamiltonian {
    int n_qubits = 0;
    std::vector<PauliProduct> terms;
    double offset = 0.0;
    double e0 = 0.0;
    double gap = 0.0;
    double norm_bound = 0.0;
    double term_norm = 0.0;  // J = max ||h_lambda||, counting the offset share of each term
    int locality = 0;
};
CMat hamiltonian_matrix(const LocalHamiltonian& H);
double energy(const LocalHamiltonian& H, const CMat& rho);

// Parents are returned already shifted: H' = sum_i (1 - S_i), E0 = 0, gap 2, ||H'|| = 2N.
LocalHamiltonian cluster_parent(int rows, int cols);
LocalHamiltonian beta_parent(const ClusterScheme& scheme);
LocalHamiltonian iqp_parent(const IQPWeights& w);

// Preparation: explicit density operator, or a sampler returning +-1 for a unit Pauli product.
struct NoisyPreparation {
    int n_qubits = 0;
    CMat rho;
    std::function<int(const PauliProduct&, Rng&)> sampler;

    static NoisyPreparation from_density(const CMat& rho);
    static NoisyPreparation from_state(const CVec& psi);
    void validate() const;
};
// number of +1 outcomes in m measurements of the unit-normalized product
std::uint64_t measure_plus(const NoisyPreparation& prep, const PauliProduct& p, std::uint64_t m, Rng& rng);

CMat pure_density(const CVec& psi);
CMat depolarize(const CMat& rho, double p);
CMat random_mixed_state(int dim, int rank, Rng& rng);
double fidelity_pure(const CVec& psi, const CMat& sigma);
CVec scheme_state(const ClusterScheme& scheme);

struct FidelityBounds {
    double f_min;
    double f_max;
};
FidelityBounds fidelity_bounds(const LocalHamiltonian& H, const NoisyPreparation& prep);

struct WitnessVerdict {
    bool accept = false;
    double witness = 0.0;    // <W>* = 1 - E*/gap
    double threshold = 0.0;  // F_T + eps
    std::uint64_t m = 0;     // measurements per term
    double delta = 0.0;      // fidelity gap of the test
};
std::uint64_t witness_measurements(const LocalHamiltonian& H, double eps, double alpha);
double witness_gap(double f_t, double gap, double norm, double eps);
WitnessVerdict witness_test(const NoisyPreparation& prep, const LocalHamiltonian& H, double f_t, double alpha,
                            double eps, Rng& rng, std::uint64_t cap = 1ULL << 40);

// product of generators S_{beta,k}^{x_k} as single-site factors
PauliProduct stabilizer_product(const ClusterScheme& scheme, std::uint64_t x);
PauliProduct stabilizer_sample(const ClusterScheme& scheme, Rng& rng);

std::uint64_t rapid_fidelity_rounds(double eps, double delta);
double rapid_fidelity(const NoisyPreparation& prep, const ClusterScheme& scheme, double eps, double delta, Rng& rng);
// exact group average 2^-N sum_s Tr[s sigma]
double stabilizer_group_average(const ClusterScheme& scheme, const CMat& sigma);

struct StrategyElement {
    double mu;
    CMat projector;
};
using Strategy = std::vector<StrategyElement>;
struct PLMVerdict {
    bool accept = false;
    std::uint64_t rounds_run = 0;
    double gap = 0.0;  // 1 - lambda_2(Omega)
};
double strategy_gap(const Strategy& s);
std::uint64_t plm_required_rounds(double gap, double eps, double delta);
PLMVerdict plm_test(const NoisyPreparation& prep, const Strategy& strategy, std::uint64_t m, Rng& rng);
// projectors (1 + S_k)/2 with uniform weights
Strategy generator_strategy(const std::vector<PauliProduct>& generators);

double threshold_fidelity(double eps_tv);

}  // namespace qrs
