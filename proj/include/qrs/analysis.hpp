#pragma once

#include <limits>
#include <vector>

#include "qrs/circuit.hpp"

namespace qrs {

// clamps entries >= -1e-12 to zero and checks normalization to 1e-9
Probs validate_probs(const Probs& p);

double porter_thomas_pdf(double p, double D);
double porter_thomas_pdf_asymptotic(double p, double D);
// probabilities at the PT quantiles (i + 1/2)/D, renormalized; a deterministic PT-shaped vector
Probs porter_thomas_vector(int D);

double anticonc_fraction(const Probs& p, double alpha);

double tv_distance(const Probs& p, const Probs& q);
// m+1 boundaries with equal mass 1/m under D exp(-D p); last boundary is 1
std::vector<double> pt_bin_edges(int m, double D);
// boundaries with mass 1/m under the size-biased law D^2 p exp(-D p) that ideal samples follow
std::vector<double> pt_sample_bin_edges(int m, double D);
int pt_bin(double p, const std::vector<double>& edges);
double tv_to_porter_thomas(const Probs& p, int m_bins);
int default_pt_bins(int n_qubits);  // min{floor(2^n/5), 100}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
double renyi_entropy(const Probs& p, double alpha);  // bits; alpha = kInfinity gives H_min
double min_entropy(const Probs& p);
double shannon_entropy(const Probs& p);  // bits

struct TruncatedVector {
    Probs values;                 // original indexing, removed entries set to 0
    std::vector<std::size_t> removed_tail;
    std::size_t removed_max = 0;
    double removed_weight = 0.0;  // tail weight only
    double max_value = 0.0;

    std::vector<double> sorted() const;  // remaining entries, descending
};

TruncatedVector truncate(const Probs& p, double eps);
double l23_quasinorm(const std::vector<double>& v);

struct SampleBounds {
    double lower;
    double upper;
};
// constants of the optimal-test theorem reported as 1
SampleBounds vv_sample_bounds(const Probs& p, double eps);

double second_moment_min_entropy_bound(double second_moment_sum, double delta);

struct Tradeoff {
    double eps_tv;
    double hard_fraction;
};
Tradeoff supremacy_tradeoff(double gamma, double delta);

}  // namespace qrs
