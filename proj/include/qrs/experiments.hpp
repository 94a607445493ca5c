#pragma once

#include <limits>
#include <vector>

#include "qrs/analysis.hpp"
#include "qrs/easing.hpp"
#include "qrs/qmc.hpp"

namespace qrs {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

// output distribution of an n x n cluster scheme with angles drawn from the discrete set
Probs random_logical_distribution(int n, Rng& rng);
// fraction of outcomes with p >= 1/2^n, one value per instance
std::vector<double> anticoncentration_ensemble(int n, int instances, Rng& rng);
// binned TV distance to Porter-Thomas, one value per instance
std::vector<double> porter_thomas_ensemble(int n, int instances, Rng& rng);

struct SignPoint {
    int instance;
    double alpha;
    double d_nu1;  // 2^n nu_1(H_alpha)
    double sign;
};
// random open-chain two-local qubit Hamiltonians, rescaled positive parts on an alpha grid
std::vector<SignPoint> sign_vs_nonstoquasticity(int n, int instances, double alpha_max, int grid, double beta, int m,
                                                Rng& rng);
struct SignTrend {
    LinearFit pooled;      // every (instance, alpha) point
    LinearFit median_fit;  // per-alpha medians over instances
};
SignTrend sign_trend(const std::vector<SignPoint>& pts);

struct EasingPoint {
    double nu_before;
    double nu_after;
    double ratio() const { return nu_after > 0 ? nu_before / nu_after : std::numeric_limits<double>::infinity(); }
};
EasingPoint ease_term(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng, RMat* O_out = nullptr);
OptimizerConfig ladder_optimizer();
OptimizerConfig hidden_optimizer();
OptimizerConfig jmodel_optimizer();

}  // namespace qrs
