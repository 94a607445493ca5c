#pragma once

#include <utility>
#include <vector>

#include "qrs/qmc.hpp"

namespace qrs {

struct LocalTerm {
    int d = 2;
    RMat h;  // d^2 x d^2, row index a*d + b with a on the left site
    void validate() const;
};

RMat kron(const RMat& A, const RMat& B);
// (O x O) h (O x O)^T
LocalTerm conjugate_local(const LocalTerm& h, const RMat& O);

// Sum over (i1 i2 i3; j1 j2 i3), i2 != j2, of g((h x 1 + 1 x h) entry).
enum class EntryPenalty { Max, Smooth, MaxSquared };
double effective_objective(const LocalTerm& h, EntryPenalty g, double alpha, RMat* grad_h = nullptr);
double effective_nu1(const LocalTerm& h);
// number of index patterns in the sum above
std::size_t effective_terms(int d);

double smooth_max(double x, double alpha);  // x + log(1 + e^{-alpha x})/alpha, overflow safe
double smooth_objective(const LocalTerm& h, double alpha, int p);

// Euclidean gradient of objective(h(O)) with respect to the entries of O
RMat objective_gradient(const LocalTerm& h, const RMat& O, EntryPenalty g, double alpha);
RMat objective_gradient(const LocalTerm& h, const RMat& O, double alpha, int p);
double objective_at(const LocalTerm& h, const RMat& O, EntryPenalty g, double alpha);

enum class InitKind { Identity, PerturbedIdentity, Haar };

struct OptimizerConfig {
    int p = 1;              // 1: smoothed l1, 2: squared positive part
    double alpha = 50.0;
    int max_iters = 500;
    double grad_tol = 1e-10;
    int restarts = 1;
    InitKind init = InitKind::Haar;
    double perturbation = 0.05;
    void validate() const;
};

struct OptResult {
    RMat O;
    std::vector<double> trace;  // objective after each accepted step, starting with the initial value
    double nu1 = 0.0;           // exact effective measure at O
    int iterations = 0;
    int line_search_failures = 0;
    bool converged = false;
};

RMat cayley(const RMat& W);
RMat polar_orthogonal(const RMat& M);
RMat initial_point(int d, InitKind kind, double perturbation, int restart, Rng& rng);

// one Riemannian CG run on O(d) from O0
OptResult cg_run(const LocalTerm& h, const RMat& O0, const OptimizerConfig& cfg);
// config.restarts runs; the first from config.init, later ones alternate the determinant sign
OptResult cg_minimize(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng);
// squared-l1 pre-optimization, then smoothed l1 from its minimizer, versus direct smoothed l1;
// the lowest exact measure wins
OptResult hybrid_minimize(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng);

// random spectrum in [-1,1], Haar basis, positive off-diagonals removed, hidden Haar O^{x2}
struct HiddenInstance {
    LocalTerm term;
    RMat hidden;  // O such that conjugate_local(term, O^T) is stoquastic
};
HiddenInstance hidden_stoquastic(int d, Rng& rng);
LocalTerm hidden_stoquastic_term(int d, Rng& rng);

// dimer terms, d = 4; spin operators are Pauli/2 unless half_spin is false
LocalTerm jmodel_term(double J0, double J1, double J2, double J3, bool half_spin = true);
LocalTerm ladder_term(double Jpar, double Jperp, double Jx, bool half_spin = true);

struct SignPair {
    double before;
    double after;
};
SignPair sign_after_easing(const LocalTerm& term, const RMat& O, int n_sites, double beta, int m);

// MAXCUT gadget
struct Graph {
    int v = 0;
    std::vector<std::pair<int, int>> edges;
    int max_degree() const;
    void validate() const;
};
enum class GadgetMode { Clifford, Orthogonal };
struct GadgetInstance {
    Graph graph;
    double C = 0.0;
    TwoLocalSpec spec;  // originals 0..v-1, ancilla of edge k is v + k
};
GadgetInstance maxcut_gadget(const Graph& g, GadgetMode mode = GadgetMode::Clifford);
int maxcut(const Graph& g);

// per-site W^w X^x Z^z with W the Hadamard-type swap of X and Z
TwoLocalSpec clifford_conjugate(const TwoLocalSpec& spec, const std::vector<int>& w, const std::vector<int>& x,
                                const std::vector<int>& z);
enum class CliffordSearch { ZFlip, Full };
struct CliffordOptimum {
    double nu1 = 0.0;
    std::vector<int> w, x, z;
};
CliffordOptimum brute_force_clifford_optimum(const GadgetInstance& inst, CliffordSearch mode);

double xz_lower_bound(const std::vector<double>& x);
// sum over sign patterns of max{sum_j (-1)^l_j x_j, 0} (unnormalized)
double xz_enumeration(const std::vector<double>& x);

std::vector<Graph> all_graphs(int v);

}  // namespace qrs
