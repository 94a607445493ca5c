#pragma once

#include <vector>

#include "qrs/analysis.hpp"
#include "qrs/samplers.hpp"

namespace qrs {

struct Verdict {
    bool accept = false;
    double statistic = 0.0;
    double threshold = 0.0;
};

// sum over subset of ((X(x) - kP(x))^2 - X(x)) / P(x)^{2/3}; +inf if a zero-probability outcome was seen
double chi23_statistic(const SampleSet& samples, const Probs& target, const std::vector<std::size_t>& subset);

struct VVConfig {
    double constant = 4.0;          // threshold = constant * k^{k_exp} * ||P_M||_{2/3}^{norm_exp}
    double k_exponent = 1.0;
    double norm_exponent = 1.0 / 3.0;
};

struct VVPartition {
    std::vector<std::size_t> order;  // outcome indices sorted by nonincreasing P
    std::size_t s = 0;               // M = order[1..s-1], S = order[s..]
    std::vector<std::size_t> M() const;
    std::vector<std::size_t> S() const;
};
VVPartition vv_partition(const Probs& target, double eps);
Verdict vv_identity_test(const SampleSet& samples, const Probs& target, double eps, const VVConfig& cfg = {});

double xeb_fidelity(const SampleSet& samples, const Probs& target);
// natural-log units unless bits is set
double ce_difference(const SampleSet& samples, const Probs& target, bool bits = false);
// lower median of the probability multiset
double lower_median(const Probs& p);
double hog_fidelity(const SampleSet& samples, const Probs& target);
bool hog_check(const SampleSet& samples, const Probs& target);
double bog_distance(const SampleSet& samples, const Probs& target, int m_bins);

// the same statistics with the sample average replaced by an exact average over Q
double xeb_exact(const Probs& Q, const Probs& target);
double ce_difference_exact(const Probs& Q, const Probs& target, bool bits = false);
double hog_fidelity_exact(const Probs& Q, const Probs& target);
double bog_distance_exact(const Probs& Q, const Probs& target, int m_bins);

double row_norm(const CMat& X);
struct RowNormVerdict {
    bool boson_sampler;
    double statistic;
    double threshold;
};
// Gaussian reference: Pr[R* >= 1] and the expected gap (1/2) E|R* - 1|, by Monte Carlo
struct RowNormReference {
    double p_at_least_one;
    double gap;
};
RowNormReference row_norm_reference(int n, int draws, Rng& rng);
// statistic: excess fraction of R* >= 1 over the Gaussian reference; boson if above half the gap
RowNormVerdict row_norm_discriminator(const std::vector<CMat>& submatrices, const RowNormReference& ref);

double depolarization_estimate(double xeb_avg, int n, double moment_sum);

struct XProgramBias {
    double brute_force;
    double code_average;
};
// P is k x n over {0,1}, rows are Hamiltonian terms
XProgramBias xprogram_bias(const std::vector<std::vector<int>>& P, double theta, const std::vector<int>& s);
Probs xprogram_distribution(const std::vector<std::vector<int>>& P, double theta);

}  // namespace qrs
