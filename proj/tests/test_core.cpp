#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "qrs/analysis.hpp"
#include "qrs/circuit.hpp"
#include "qrs/random_matrix.hpp"

using namespace qrs;

namespace {

// dense oracle: kron of 2x2 matrices, qubit q acting on bit q
CMat embed1(const Eigen::Matrix2cd& g, int q, int n) {
    CMat U = CMat::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) {
        CMat f = k == q ? CMat(g) : CMat::Identity(2, 2);
        CMat next(U.rows() * 2, U.cols() * 2);
        for (int i = 0; i < U.rows(); ++i)
            for (int j = 0; j < U.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = U(i, j) * f;
        U = next;
    }
    return U;
}

CMat cz_dense(int a, int b, int n) {
    CMat U = CMat::Identity(1 << n, 1 << n);
    for (int x = 0; x < (1 << n); ++x)
        if (bit(x, a) && bit(x, b)) U(x, x) = -1;
    return U;
}

Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

}  // namespace

TEST(Rng, SplitStreamsAreIndependentOfParentCounter) {
    Rng a(7), b(7);
    a.next();
    a.next();
    EXPECT_EQ(a.split(3).next(), b.split(3).next());
    EXPECT_NE(b.split(3).next(), b.split(4).next());
}

TEST(Rng, UniformAndBelowRanges) {
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(r.below(7), 7u);
    }
}

TEST(Simulate, SingleHadamard) {
    Circuit c(1);
    c.add(Gate::h(0));
    auto s = simulate(c);
    EXPECT_NEAR(s.amplitudes[0].real(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(s.amplitudes[1].real(), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Simulate, EmptyCircuitIsZeroState) {
    auto s = simulate(Circuit(2));
    EXPECT_NEAR(std::abs(s.amplitudes[0] - cplx(1)), 0, 1e-15);
    for (int i = 1; i < 4; ++i) EXPECT_EQ(std::abs(s.amplitudes[i]), 0);
}

TEST(Simulate, HadamardsThenCZ) {
    Circuit c(2);
    c.h_layer().add(Gate::cz(0, 1));
    auto s = simulate(c);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.amplitudes[i].real(), 0.5, 1e-12);
    EXPECT_NEAR(s.amplitudes[3].real(), -0.5, 1e-12);
}

TEST(Simulate, CapIsEnforced) {
    EXPECT_THROW(simulate(Circuit(30)), CapExceeded);
}

TEST(Simulate, MatchesDenseProductOnRandomCircuits) {
    Rng rng(11);
    for (int t = 0; t < 5; ++t) {
        auto c = random_parallel_circuit(4, 3, rng);
        c.add(Gate::t(1)).add(Gate::cnot(2, 0)).add(Gate::ccz(0, 1, 3)).add(Gate::rz(2, 0.3));
        CVec psi = circuit_unitary(c).col(0);
        EXPECT_LT((simulate(c).amplitudes - psi).norm(), 1e-10);
    }
}

TEST(Born, BasicCases) {
    Circuit c(1);
    c.add(Gate::h(0));
    auto p = born_distribution(simulate(c));
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 0.5, 1e-12);
    auto q = born_distribution(simulate(Circuit(1)));
    EXPECT_NEAR(q[0], 1, 1e-15);
    EXPECT_NEAR(q[1], 0, 1e-15);
}

TEST(Cluster, TwoByTwoMatchesDenseOracle) {
    ClusterScheme s{2, 2, {0, 0, 0, 0}};
    const int n = 4;
    CMat U = CMat::Identity(16, 16);
    for (int q = 0; q < n; ++q) U = embed1(hadamard(), q, n) * U;
    for (auto [a, b] : s.edges()) U = cz_dense(a, b, n) * U;
    for (int q = 0; q < n; ++q) U = embed1(hadamard(), q, n) * U;
    CVec psi = U.col(0);
    auto p = born_distribution(simulate(cluster_circuit(s)));
    for (int x = 0; x < 16; ++x) EXPECT_NEAR(p[x], std::norm(psi[x]), 1e-12);
}

TEST(Cluster, OneByTwoStateIsCZOnPlusStates) {
    ClusterScheme s{1, 2, {0, 0}};
    CMat pre = cz_dense(0, 1, 2) * embed1(hadamard(), 0, 2) * embed1(hadamard(), 1, 2);
    CMat full = embed1(hadamard(), 0, 2) * embed1(hadamard(), 1, 2) * pre;
    auto s_vec = simulate(cluster_circuit(s)).amplitudes;
    EXPECT_LT((s_vec - CVec(full.col(0))).norm(), 1e-12);
}

TEST(Cluster, SingleQubitMarginalsAreUniform) {
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        auto s = random_cluster_scheme(2, 3, rng);
        auto p = born_distribution(simulate(cluster_circuit(s)));
        for (int q = 0; q < 6; ++q) {
            double m1 = 0;
            for (std::size_t x = 0; x < p.size(); ++x)
                if (bit(x, q)) m1 += p[x];
            EXPECT_NEAR(m1, 0.5, 1e-10);
        }
    }
}

TEST(IQP, OneQubitZeroWeightIsIdentity) {
    IQPWeights w{1, RMat::Zero(1, 1), std::nullopt};
    auto p = born_distribution(simulate(iqp_circuit(w)));
    EXPECT_NEAR(p[0], 1, 1e-12);
}

TEST(IQP, PartitionFunctionCases) {
    IQPWeights w{2, RMat::Zero(2, 2), std::nullopt};
    EXPECT_NEAR(std::abs(ising_partition_function(w) - cplx(4)), 0, 1e-12);
    IQPWeights one{1, RMat::Constant(1, 1, kPi / 2), std::nullopt};
    EXPECT_NEAR(std::abs(ising_partition_function(one)), 0, 1e-12);
}

TEST(IQP, PartitionFunctionMatchesAmplitude) {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        IQPWeights w{3, RMat::Zero(3, 3), std::nullopt};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) w.W(i, j) = w.W(j, i) = rng.uniform(0, 2 * kPi);
        double amp = std::abs(simulate(iqp_circuit(w)).amplitudes[0]);
        EXPECT_NEAR(std::abs(ising_partition_function(w)) / 8.0, amp, 1e-10);
    }
}

TEST(Ngap, SmallPolynomials) {
    DegreeThreePolynomial zero{3, {}, {}, {}};
    EXPECT_NEAR(ngap(zero), 1, 1e-15);
    DegreeThreePolynomial lin{1, {}, {}, {0}};
    EXPECT_NEAR(ngap(lin), 0, 1e-15);
    DegreeThreePolynomial quad{2, {}, {{0, 1}}, {}};
    EXPECT_NEAR(ngap(quad), 0.5, 1e-15);
}

TEST(Ngap, MatchesCircuitAmplitude) {
    DegreeThreePolynomial f{4, {{0, 1, 2}}, {{1, 3}}, {2}};
    auto amp = simulate(ngap_circuit(f)).amplitudes[0];
    EXPECT_NEAR(amp.real(), ngap(f), 1e-12);
}

TEST(Haar, OneDimensionalIsUnitModulus) {
    Rng rng(1);
    EXPECT_NEAR(std::abs(haar_unitary(1, rng)(0, 0)), 1, 1e-12);
}

TEST(Haar, UnitaryAndOrthogonal) {
    Rng rng(2);
    auto U = haar_unitary(6, rng);
    EXPECT_LT((U.adjoint() * U - CMat::Identity(6, 6)).norm(), 1e-10);
    auto O = haar_orthogonal(5, rng);
    EXPECT_LT((O.transpose() * O - RMat::Identity(5, 5)).norm(), 1e-10);
}

TEST(Haar, FirstTwoMomentsAtDimensionTwo) {
    Rng rng(42);
    const int N = 100000;
    double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
    for (int i = 0; i < N; ++i) {
        double p = std::norm(haar_unitary(2, rng)(0, 0));
        s1 += p;
        s1sq += p * p;
        s2 += p * p;
        s2sq += p * p * p * p;
    }
    double m1 = s1 / N, m2 = s2 / N;
    double se1 = std::sqrt((s1sq / N - m1 * m1) / N), se2 = std::sqrt((s2sq / N - m2 * m2) / N);
    EXPECT_LT(std::fabs(m1 - 0.5), 5 * se1);
    EXPECT_LT(std::fabs(m2 - 1.0 / 3.0), 5 * se2);
}

TEST(RandomCircuit, DepthZeroIsEmpty) {
    Rng rng(1);
    EXPECT_TRUE(random_parallel_circuit(4, 0, rng).gates.empty());
}

TEST(RandomCircuit, SingleLayerBrickworkCount) {
    Rng rng(9);
    std::set<std::size_t> counts;
    for (int t = 0; t < 20; ++t) counts.insert(random_parallel_circuit(4, 1, rng).gates.size());
    for (auto c : counts) EXPECT_TRUE(c == 1 || c == 2);
}

TEST(RandomCircuit, AnticoncentratesAtDepthFourN) {
    Rng rng(17);
    std::vector<double> g;
    for (int t = 0; t < 10; ++t)
        g.push_back(anticonc_fraction(born_distribution(simulate(random_parallel_circuit(10, 40, rng))), 1.0));
    double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
    EXPECT_NEAR(mean, std::exp(-1.0), 0.03);
}

TEST(Permanent, SmallCases) {
    EXPECT_NEAR(std::abs(permanent(CMat::Identity(4, 4)) - cplx(1)), 0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(CMat::Ones(3, 3)) - cplx(6)), 0, 1e-12);
}

TEST(Permanent, RyserMatchesPermutationSum) {
    Rng rng(4);
    for (int t = 0; t < 5; ++t) {
        auto X = ginibre(5, 5, rng);
        EXPECT_LT(std::abs(permanent(X) - permanent_naive(X)), 1e-10);
    }
}

TEST(BosonSampling, HongOuMandel) {
    CMat U(2, 2);
    U << 1, 1, 1, -1;
    U /= std::sqrt(2.0);
    EXPECT_NEAR(boson_probability(U, {1, 1}, 2), 0, 1e-12);
    EXPECT_NEAR(boson_probability(U, {2, 0}, 2), 0.5, 1e-12);
}

TEST(BosonSampling, ProbabilitiesNormalize) {
    Rng rng(8);
    auto U = haar_unitary(4, rng);
    double total = 0;
    for (const auto& S : occupation_patterns(4, 3)) total += boson_probability(U, S, 3);
    EXPECT_NEAR(total, 1, 1e-8);
}

TEST(IonTrap, AllZeroFlipsGivePi) {
    for (int k = 1; k <= 3; ++k) {
        std::vector<std::vector<int>> z(k + 1, std::vector<int>(3, 0));
        auto w = iontrap_weights_from_flips(3, k, z);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) EXPECT_NEAR(w.W(i, j), kPi, 1e-12);
    }
}

TEST(IonTrap, SignedGeometricDecomposition) {
    Rng rng(6);
    const int n = 4, k = 3;
    std::vector<std::vector<int>> z(k + 1, std::vector<int>(n));
    for (auto& row : z)
        for (auto& v : row) v = int(rng.below(2));
    auto w = iontrap_weights_from_flips(n, k, z);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // x_ij(l) = sum_{m <= l} z_i(m) + z_j(m) flips the sign of pi/2^l
            double expect = kPi / double(1 << (k + 1));
            int parity = 0;
            for (int l = 1; l <= k + 1; ++l) {
                parity ^= i == j ? z[l - 1][i] : z[l - 1][i] ^ z[l - 1][j];
                expect += (parity ? -1.0 : 1.0) * kPi / double(1 << l);
            }
            EXPECT_NEAR(w.W(i, j), wrap_angle(expect), 1e-12);
        }
}

TEST(IonTrap, SingleColumnWeightsUniformOverFourAngles) {
    Rng rng(12);
    std::map<long, int> hist;
    const int N = 10000;
    for (int t = 0; t < N; ++t) {
        auto w = iontrap_weights(2, 1, 1, rng);
        hist[std::lround(w.W(0, 1) / (kPi / 2)) % 4]++;
    }
    ASSERT_EQ(hist.size(), 4u);
    double chi2 = 0;
    for (auto [k, c] : hist) chi2 += (c - N / 4.0) * (c - N / 4.0) / (N / 4.0);
    EXPECT_LT(chi2, 11.34);  // chi^2_3 quantile at p = 0.01
}

TEST(IonTrap, GateLevelCircuitMatchesSymbolicWeights) {
    Rng rng(13);
    const int n = 3, k = 2;
    std::vector<std::vector<int>> z(k + 1, std::vector<int>(n));
    for (auto& row : z)
        for (auto& v : row) v = int(rng.below(2));
    auto p_gates = born_distribution(simulate(iontrap_circuit(n, k, z)));
    auto p_iqp = born_distribution(simulate(iqp_circuit(iontrap_weights_from_flips(n, k, z))));
    EXPECT_LT(tv_distance(p_gates, p_iqp), 1e-9);
}

// property: every circuit family preserves the norm
class NormPreservation : public ::testing::TestWithParam<int> {};
TEST_P(NormPreservation, RandomCircuits) {
    Rng rng{std::uint64_t(GetParam())};
    EXPECT_NEAR(simulate(random_parallel_circuit(6, 6, rng)).norm(), 1, 1e-12);
    EXPECT_NEAR(simulate(cluster_circuit(random_cluster_scheme(2, 3, rng))).norm(), 1, 1e-12);
    EXPECT_NEAR(simulate(iqp_circuit(iontrap_weights(5, 2, 2, rng))).norm(), 1, 1e-12);
}
INSTANTIATE_TEST_SUITE_P(Seeds, NormPreservation, ::testing::Range(1, 9));
