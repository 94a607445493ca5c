#include <gtest/gtest.h>

#include <cmath>

#include "qrs/certification.hpp"

using namespace qrs;

namespace {

double ground_energy(const CMat& H) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    return es.eigenvalues()[0];
}

double spectral_gap(const CMat& H) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    return es.eigenvalues()[1] - es.eigenvalues()[0];
}

ClusterScheme random_scheme(int rows, int cols, Rng& rng) { return random_cluster_scheme(rows, cols, rng); }

}  // namespace

TEST(Parents, OneByTwoClusterSpectrum) {
    auto H = cluster_parent(1, 2);
    CMat M = hamiltonian_matrix(H);
    // shifted: H' = 2 - (X1 Z2 + Z1 X2), ground 0 and gap 2
    EXPECT_NEAR(ground_energy(M), 0, 1e-12);
    EXPECT_NEAR(spectral_gap(M), 2, 1e-12);
    EXPECT_NEAR(ground_energy(M - H.offset * CMat::Identity(4, 4)), -2, 1e-12);
}

TEST(Parents, ClusterStateIsGroundStateOnTwoByThree) {
    ClusterScheme s{2, 3, std::vector<double>(6, 0.0)};
    auto psi = scheme_state(s);
    auto H = cluster_parent(2, 3);
    CMat rho = pure_density(psi);
    EXPECT_NEAR(energy(H, rho), 0, 1e-10);
    // unshifted energy is -N
    EXPECT_NEAR(energy(H, rho) - H.offset, -6, 1e-10);
    EXPECT_NEAR(spectral_gap(hamiltonian_matrix(H)), 2, 1e-10);
}

TEST(Parents, ZeroAnglesReduceToCluster) {
    ClusterScheme s{2, 2, std::vector<double>(4, 0.0)};
    EXPECT_LT((hamiltonian_matrix(beta_parent(s)) - hamiltonian_matrix(cluster_parent(2, 2))).norm(), 1e-12);
}

TEST(Parents, BetaParentAnnihilatesSchemeState) {
    Rng rng(1);
    for (int t = 0; t < 5; ++t) {
        auto s = random_scheme(2, 3, rng);
        auto H = beta_parent(s);
        EXPECT_NEAR(energy(H, pure_density(scheme_state(s))), 0, 1e-10);
        EXPECT_NEAR(spectral_gap(hamiltonian_matrix(H)), 2, 1e-10);
    }
}

TEST(Parents, IqpParentAnnihilatesIqpState) {
    Rng rng(2);
    IQPWeights w{4, RMat::Zero(4, 4), std::nullopt};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) w.W(i, j) = w.W(j, i) = kPi / 4 * double(rng.below(8));
    auto H = iqp_parent(w);
    CVec psi = simulate(iqp_circuit(w)).amplitudes;
    EXPECT_NEAR(energy(H, pure_density(psi)), 0, 1e-10);
    EXPECT_NEAR(spectral_gap(hamiltonian_matrix(H)), 2, 1e-10);
}

TEST(FidelityBounds, GroundStateAndMaximallyMixed) {
    ClusterScheme s{2, 2, std::vector<double>(4, 0.0)};
    auto H = cluster_parent(2, 2);
    auto b = fidelity_bounds(H, NoisyPreparation::from_state(scheme_state(s)));
    EXPECT_NEAR(b.f_min, 1, 1e-12);
    EXPECT_NEAR(b.f_max, 1, 1e-12);
    auto mm = fidelity_bounds(H, NoisyPreparation::from_density(CMat::Identity(16, 16) / 16.0));
    EXPECT_NEAR(mm.f_min, 1 - 4.0 / 2, 1e-12);
}

TEST(FidelityBounds, BracketExactFidelity) {
    Rng rng(3);
    for (auto [r, c] : {std::pair{2, 2}, std::pair{2, 3}}) {
        ClusterScheme s{r, c, std::vector<double>(r * c, 0.0)};
        auto psi = scheme_state(s);
        auto H = cluster_parent(r, c);
        for (int t = 0; t < 50; ++t) {
            CMat sigma = random_mixed_state(1 << (r * c), 1 + int(rng.below(4)), rng);
            // bias towards the target so the bounds are nontrivial
            sigma = depolarize(0.5 * pure_density(psi) + 0.5 * sigma, 0.0);
            double F = fidelity_pure(psi, sigma);
            auto b = fidelity_bounds(H, NoisyPreparation::from_density(sigma));
            EXPECT_LE(b.f_min, F + 1e-9);
            EXPECT_GE(b.f_max, F - 1e-9);
        }
    }
}

TEST(Witness, GapFormula) {
    EXPECT_NEAR(witness_gap(0.9, 2, 10, 0.01), 0.084, 1e-12);
}

TEST(Witness, AcceptsIdealRejectsDepolarized) {
    Rng rng(4);
    ClusterScheme s{2, 2, std::vector<double>(4, 0.0)};
    auto psi = scheme_state(s);
    auto H = cluster_parent(2, 2);
    const double f_t = 0.9, alpha = 0.05, eps = 0.01;
    auto ideal = NoisyPreparation::from_state(psi);
    // F = 1 - p (1 - 1/16); p = 0.3 puts F far below the threshold
    auto noisy = NoisyPreparation::from_density(depolarize(pure_density(psi), 0.3));
    int acc = 0, rej = 0;
    for (int t = 0; t < 100; ++t) {
        Rng a = rng.split(2 * t), b = rng.split(2 * t + 1);
        acc += witness_test(ideal, H, f_t, alpha, eps, a).accept;
        rej += !witness_test(noisy, H, f_t, alpha, eps, b).accept;
    }
    EXPECT_GE(acc, 95);
    EXPECT_GE(rej, 95);
}

TEST(Witness, MeasurementCountGrowsWithPrecision) {
    auto H = cluster_parent(2, 2);
    EXPECT_GT(witness_measurements(H, 0.01, 0.05), witness_measurements(H, 0.02, 0.05));
    EXPECT_GT(witness_measurements(H, 0.01, 0.01), witness_measurements(H, 0.01, 0.05));
}

TEST(Stabilizers, IdentityAndGenerator) {
    ClusterScheme s{1, 2, {0.3, 0.7}};
    EXPECT_TRUE(stabilizer_product(s, 0).is_identity());
    auto g = stabilizer_product(s, 1);
    ASSERT_EQ(g.sites[0].kind, Factor::Zb);
    EXPECT_NEAR(g.sites[0].beta, 0.3, 1e-15);
    EXPECT_EQ(g.sites[1].kind, Factor::X);
    EXPECT_NEAR(std::fabs(g.coefficient), 1, 1e-15);
}

TEST(Stabilizers, EveryGroupElementStabilizes) {
    Rng rng(5);
    auto s = random_scheme(2, 2, rng);
    auto psi = scheme_state(s);
    for (std::uint64_t x = 0; x < 16; ++x) EXPECT_NEAR(expectation(stabilizer_product(s, x), psi), 1, 1e-10);
}

TEST(Stabilizers, SamplingIsUniformOverTheGroup) {
    Rng rng(6);
    ClusterScheme s{2, 2, std::vector<double>(4, 0.0)};
    std::vector<CMat> group;
    for (std::uint64_t x = 0; x < 16; ++x) group.push_back(product_matrix(stabilizer_product(s, x)));
    for (int a = 0; a < 16; ++a)
        for (int b = a + 1; b < 16; ++b) ASSERT_GT((group[a] - group[b]).norm(), 1e-6);
    const int N = 32000;
    std::vector<int> counts(16, 0);
    for (int t = 0; t < N; ++t) {
        CMat m = product_matrix(stabilizer_sample(s, rng));
        for (std::uint64_t x = 0; x < 16; ++x)
            if ((m - group[x]).norm() < 1e-9) counts[x]++;
    }
    const double sd = std::sqrt(N / 16.0 * (15.0 / 16));
    for (int c : counts) EXPECT_LT(std::fabs(c - N / 16.0), 3.5 * sd);
}

TEST(RapidFidelity, GroupAverageIsExactFidelity) {
    Rng rng(7);
    for (auto [r, c] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
        auto s = random_scheme(r, c, rng);
        auto psi = scheme_state(s);
        for (int t = 0; t < 5; ++t) {
            CMat sigma = random_mixed_state(1 << (r * c), 3, rng);
            EXPECT_NEAR(stabilizer_group_average(s, sigma), fidelity_pure(psi, sigma), 1e-9);
        }
    }
}

TEST(RapidFidelity, IdealStateEstimatesOne) {
    Rng rng(8);
    auto s = random_scheme(2, 2, rng);
    auto prep = NoisyPreparation::from_state(scheme_state(s));
    for (int t = 0; t < 5; ++t) EXPECT_GE(rapid_fidelity(prep, s, 0.05, 0.05, rng), 1 - 0.05);
}

TEST(RapidFidelity, TableReproduction) {
    EXPECT_NEAR(threshold_fidelity(1.0 / 22), 0.9979, 5e-5);
    EXPECT_NEAR(threshold_fidelity(0.2), 0.96, 1e-12);
    EXPECT_NEAR(threshold_fidelity(1.0), 0, 1e-12);
    // order of magnitude only: 7.5e4 in the table
    const double eps = (1 - threshold_fidelity(0.2)) / 5;
    auto m = double(rapid_fidelity_rounds(eps, 0.01));
    EXPECT_NEAR(std::log10(m), std::log10(7.5e4), 1.0);
}

TEST(PLM, ProjectiveStrategyAcceptanceBound) {
    Rng rng(9);
    ClusterScheme s{1, 3, std::vector<double>(3, 0.0)};
    auto psi = scheme_state(s);
    Strategy proj{{1.0, pure_density(psi)}};
    EXPECT_NEAR(strategy_gap(proj), 1, 1e-12);
    const double eps = 0.2;
    // F = 1 - p (7/8) = 1 - eps
    auto sigma = depolarize(pure_density(psi), eps * 8 / 7);
    auto prep = NoisyPreparation::from_density(sigma);
    const std::uint64_t m = 5;
    int acc = 0;
    const int T = 4000;
    for (int t = 0; t < T; ++t) acc += plm_test(prep, proj, m, rng).accept;
    const double bound = std::pow(1 - eps, double(m));
    EXPECT_LE(double(acc) / T, bound + 3 * std::sqrt(bound * (1 - bound) / T));
}

TEST(PLM, IdealStateAlwaysAccepts) {
    Rng rng(10);
    auto s = random_scheme(2, 2, rng);
    std::vector<PauliProduct> gens;
    for (int k = 0; k < 4; ++k) gens.push_back(stabilizer_product(s, 1ULL << k));
    auto strat = generator_strategy(gens);
    auto prep = NoisyPreparation::from_state(scheme_state(s));
    for (int t = 0; t < 20; ++t) EXPECT_TRUE(plm_test(prep, strat, 50, rng).accept);
}

TEST(PLM, GeneratorStrategyGap) {
    // uniform mixture of the n generator projectors has second eigenvalue 1 - 1/n
    for (auto [r, c] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{2, 3}}) {
        ClusterScheme s{r, c, std::vector<double>(r * c, 0.0)};
        std::vector<PauliProduct> gens;
        for (int k = 0; k < r * c; ++k) gens.push_back(stabilizer_product(s, 1ULL << k));
        EXPECT_NEAR(strategy_gap(generator_strategy(gens)), 1.0 / (r * c), 1e-10);
    }
}

TEST(PLM, RequiredRounds) {
    EXPECT_GE(plm_required_rounds(1.0, 0.1, 0.05), std::uint64_t(std::ceil(std::log(0.05) / std::log(0.9))));
}

// property: every Pauli product is Hermitian and squares to coefficient^2
class PauliAlgebra : public ::testing::TestWithParam<int> {};
TEST_P(PauliAlgebra, StabilizersSquareToIdentity) {
    Rng rng{std::uint64_t(GetParam())};
    auto s = random_scheme(2, 2, rng);
    auto p = stabilizer_sample(s, rng);
    CMat m = product_matrix(p);
    EXPECT_LT((m - m.adjoint()).norm(), 1e-10);
    EXPECT_LT((m * m - CMat::Identity(16, 16)).norm(), 1e-10);
}
INSTANTIATE_TEST_SUITE_P(Seeds, PauliAlgebra, ::testing::Range(1, 17));
