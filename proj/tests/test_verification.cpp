#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qrs/analysis.hpp"
#include "qrs/random_matrix.hpp"
#include "qrs/samplers.hpp"
#include "qrs/verification.hpp"

using namespace qrs;

namespace {

Probs haar_state_probs(int D, Rng& rng) {
    CVec v(D);
    for (int i = 0; i < D; ++i) v[i] = rng.complex_normal();
    v.normalize();
    Probs p(D);
    for (int i = 0; i < D; ++i) p[i] = std::norm(v[i]);
    return p;
}

Probs mix(const Probs& p, const Probs& q, double lam) {
    Probs r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = (1 - lam) * p[i] + lam * q[i];
    return r;
}

}  // namespace

TEST(Chi23, Fixtures) {
    SampleSet pm{1, {0, 0, 0, 0, 0}};
    EXPECT_NEAR(chi23_statistic(pm, {1.0}, {0}), -5, 1e-12);
    SampleSet s{2, {0, 0, 0, 1}};
    EXPECT_NEAR(chi23_statistic(s, {0.5, 0.5}, {0, 1}), -2 * std::pow(2.0, 2.0 / 3), 1e-12);
}

TEST(Chi23, ExpectationUnderTarget) {
    Rng rng(1);
    Probs P{0.4, 0.3, 0.2, 0.1};
    const int k = 50, T = 4000;
    double sum = 0, sq = 0;
    for (int t = 0; t < T; ++t) {
        double v = chi23_statistic(inverse_cdf_sample(P, k, rng), P, {0, 1, 2, 3});
        sum += v;
        sq += v * v;
    }
    double mean = sum / T, se = std::sqrt((sq / T - mean * mean) / T);
    double expect = 0;
    for (double p : P) expect -= k * std::pow(p, 4.0 / 3);
    EXPECT_LT(std::fabs(mean - expect), 3 * se);
}

TEST(VV, PointMassAccepts) {
    SampleSet s{4, std::vector<std::uint64_t>(20, 2)};
    EXPECT_TRUE(vv_identity_test(s, {0, 0, 1, 0}, 0.2).accept);
}

TEST(VV, CompletenessAndSoundness) {
    Rng rng(2);
    const auto P = porter_thomas_vector(1 << 10);
    const double eps = 0.2;
    Probs U(P.size(), 1.0 / double(P.size()));
    ASSERT_GE(tv_distance(P, U), eps);
    const auto k = std::size_t(10 * vv_sample_bounds(P, eps).upper);
    int acc = 0, rej = 0;
    for (int t = 0; t < 100; ++t) {
        acc += vv_identity_test(inverse_cdf_sample(P, k, rng), P, eps).accept;
        rej += !vv_identity_test(inverse_cdf_sample(U, k, rng), P, eps).accept;
    }
    EXPECT_GE(acc, 67);
    EXPECT_GE(rej, 67);
}

TEST(XEB, Fixtures) {
    SampleSet s{2, {0}};
    EXPECT_NEAR(xeb_fidelity(s, {1, 0}), 1, 1e-12);
    Rng rng(3);
    auto P = haar_state_probs(1 << 10, rng);
    Probs U(P.size(), 1.0 / double(P.size()));
    EXPECT_NEAR(xeb_exact(U, P), 0, 1e-12);
    EXPECT_NEAR(xeb_exact(P, P), 1, 0.15);
    auto from_u = inverse_cdf_sample(U, 100000, rng);
    auto from_p = inverse_cdf_sample(P, 100000, rng);
    EXPECT_NEAR(xeb_fidelity(from_u, P), 0, 0.03);
    EXPECT_NEAR(xeb_fidelity(from_p, P), xeb_exact(P, P), 0.05);
}

TEST(CrossEntropy, Fixtures) {
    Rng rng(4);
    auto P = porter_thomas_vector(1 << 10);
    Probs U(P.size(), 1.0 / double(P.size()));
    EXPECT_NEAR(ce_difference_exact(U, P), 1, 0.01);
    EXPECT_NEAR(ce_difference_exact(U, P, true), 1 / std::log(2.0), 0.015);
    EXPECT_NEAR(ce_difference_exact(P, P), 0, 1e-12);
    EXPECT_NEAR(ce_difference(inverse_cdf_sample(P, 100000, rng), P), 0, 0.02);
}

TEST(CrossEntropy, PinskerChainOnMixtures) {
    auto P = porter_thomas_vector(1 << 10);
    Probs U(P.size(), 1.0 / double(P.size()));
    for (double lam : {0.1, 0.5}) {
        auto Q = mix(P, U, lam);
        // mixing towards uniform raises entropy, so d_CE(Q) >= 0 and bounds TV
        EXPECT_LE(tv_distance(Q, P), std::sqrt(ce_difference_exact(Q, P) / 2) + 1e-12);
    }
}

TEST(HOG, Fixtures) {
    auto P = porter_thomas_vector(1 << 10);
    Probs U(P.size(), 1.0 / double(P.size()));
    EXPECT_NEAR(hog_fidelity_exact(U, P), 0, 0.01);
    EXPECT_NEAR(hog_fidelity_exact(P, P), 1, 0.01);
    const double med = lower_median(P);
    Probs heavy(P.size(), 0.0);
    double tot = 0;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (P[i] > med) tot += heavy[i] = P[i];
    for (auto& h : heavy) h /= tot;
    EXPECT_NEAR(hog_fidelity_exact(heavy, P), 1 / std::log(2.0), 0.01);
    Rng rng(5);
    EXPECT_TRUE(hog_check(inverse_cdf_sample(P, 10000, rng), P));
    EXPECT_FALSE(hog_check(inverse_cdf_sample(U, 10000, rng), P));
}

TEST(BOG, Fixtures) {
    Rng rng(6);
    auto P = porter_thomas_vector(1 << 10);
    EXPECT_NEAR(bog_distance_exact(P, P, 12), 0, 0.01);
    EXPECT_LT(bog_distance(inverse_cdf_sample(P, 100000, rng), P, 12), 0.05);
    // all samples in the top bin
    const auto edges = pt_sample_bin_edges(4, double(P.size()));
    std::uint64_t top = 0;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (pt_bin(P[i], edges) == 3) top = i;
    SampleSet one{P.size(), std::vector<std::uint64_t>(100, top)};
    EXPECT_NEAR(bog_distance(one, P, 4), 0.75, 1e-12);
    EXPECT_EQ(bog_distance(one, P, 1), 0);
}

TEST(RowNorm, Fixtures) {
    const int n = 4;
    EXPECT_NEAR(row_norm(CMat::Identity(n, n)), std::pow(n, -n), 1e-15);
    CMat X = CMat::Constant(n, n, cplx(1));
    EXPECT_NEAR(row_norm(X), 1, 1e-12);
}

TEST(RowNorm, DiscriminatesBosonFromGaussian) {
    Rng rng(7);
    const int n = 6, draws = 4000;
    std::vector<CMat> gauss, boson;
    std::vector<double> w;
    std::vector<CMat> pool;
    for (int t = 0; t < draws; ++t) {
        auto X = ginibre(n, n, rng);
        gauss.push_back(X);
        pool.push_back(X);
        w.push_back(std::norm(permanent(X)));
    }
    // permanent-weighted resampling approximates boson-sampling submatrices
    std::vector<double> cdf(w.size());
    std::partial_sum(w.begin(), w.end(), cdf.begin());
    for (int t = 0; t < draws; ++t) {
        double u = rng.uniform() * cdf.back();
        boson.push_back(pool[std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin()]);
    }
    auto mean_stat = [](const std::vector<CMat>& xs) {
        double s = 0;
        for (const auto& x : xs) s += row_norm(x);
        return s / double(xs.size());
    };
    EXPECT_GT(mean_stat(boson), mean_stat(gauss));
    Rng rr(70);
    auto ref = row_norm_reference(n, 20000, rr);
    // the reference gap approaches 0.146 from below as n grows
    EXPECT_GT(ref.gap, 0.146 - 0.6 / std::sqrt(double(n)));
    EXPECT_LT(ref.gap, 0.5);
    EXPECT_TRUE(row_norm_discriminator(boson, ref).boson_sampler);
    EXPECT_FALSE(row_norm_discriminator(gauss, ref).boson_sampler);
}

TEST(Depolarization, Fixtures) {
    EXPECT_NEAR(depolarization_estimate(0.3, 4, 0.3), 1, 1e-12);
    EXPECT_NEAR(depolarization_estimate(0, 4, 0.3), 0, 1e-12);
    Rng rng(8);
    const int n = 8;
    auto P = haar_state_probs(1 << n, rng);
    Probs U(P.size(), 1.0 / double(P.size()));
    auto Q = mix(P, U, 0.3);
    double moment = xeb_exact(P, P);
    EXPECT_NEAR(depolarization_estimate(xeb_exact(Q, P), n, moment), 0.7, 1e-9);
}

TEST(XProgram, Fixtures) {
    std::vector<std::vector<int>> P{{1, 0, 1}};
    EXPECT_NEAR(xprogram_bias(P, 0.0, {1, 0, 1}).brute_force, 1, 1e-12);
    EXPECT_NEAR(xprogram_bias(P, kPi / 8, {1, 0, 1}).brute_force, 1, 1e-12);
    auto b = xprogram_bias(P, kPi / 8, {1, 0, 0});
    EXPECT_NEAR(b.brute_force, std::pow(std::cos(kPi / 8), 2), 1e-12);
    EXPECT_NEAR(b.code_average, b.brute_force, 1e-12);
}

TEST(XProgram, DualFormulasAgree) {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        std::vector<std::vector<int>> P(4, std::vector<int>(3));
        for (auto& r : P)
            for (auto& v : r) v = int(rng.below(2));
        std::vector<int> s(3);
        for (auto& v : s) v = int(rng.below(2));
        auto b = xprogram_bias(P, rng.uniform(0, kPi), s);
        EXPECT_NEAR(b.brute_force, b.code_average, 1e-10);
    }
}

TEST(XProgram, DistributionNormalizes) {
    auto p = xprogram_distribution({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}, kPi / 8);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1, 1e-12);
}

// property: exact statistics of mixtures interpolate linearly in lambda
class XebLinearity : public ::testing::TestWithParam<int> {};
TEST_P(XebLinearity, MixtureIsAffine) {
    Rng rng{std::uint64_t(GetParam())};
    auto P = haar_state_probs(256, rng);
    Probs U(256, 1.0 / 256);
    double lam = rng.uniform();
    EXPECT_NEAR(xeb_exact(mix(P, U, lam), P), (1 - lam) * xeb_exact(P, P), 1e-10);
}
INSTANTIATE_TEST_SUITE_P(Seeds, XebLinearity, ::testing::Range(1, 11));
