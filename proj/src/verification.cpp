#include "qrs/verification.hpp"

#include "qrs/random_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrs {

double chi23_statistic(const SampleSet& samples, const Probs& target, const std::vector<std::size_t>& subset) {
    if (samples.n_outcomes != target.size()) throw ConfigError("chi23: outcome spaces differ");
    auto X = samples.counts();
    const double k = double(samples.samples.size());
    double s = 0;
    for (auto x : subset) {
        double p = target.at(x);
        double c = double(X[x]);
        if (p <= 0) {
            if (c > 0) return kInfinity;
            continue;
        }
        double dev = c - k * p;
        s += (dev * dev - c) / std::cbrt(p * p);
    }
    return s;
}

std::vector<std::size_t> VVPartition::M() const {
    std::vector<std::size_t> m;
    for (std::size_t i = 1; i < s && i < order.size(); ++i) m.push_back(order[i]);
    return m;
}

std::vector<std::size_t> VVPartition::S() const {
    return std::vector<std::size_t>(order.begin() + std::min(s, order.size()), order.end());
}

VVPartition vv_partition(const Probs& target, double eps) {
    VVPartition part;
    part.order.resize(target.size());
    std::iota(part.order.begin(), part.order.end(), 0);
    std::stable_sort(part.order.begin(), part.order.end(),
                     [&](std::size_t a, std::size_t b) { return target[a] > target[b]; });
    // smallest s (1-based) whose tail sum_{j > s} p_j is at most eps/8
    const std::size_t N = target.size();
    std::vector<double> tail(N + 1, 0.0);
    for (std::size_t j = N; j-- > 0;) tail[j] = tail[j + 1] + target[part.order[j]];
    std::size_t s = N;
    for (std::size_t i = 1; i <= N; ++i)
        if (tail[i] <= eps / 8) {
            s = i;
            break;
        }
    part.s = s;
    return part;
}

Verdict vv_identity_test(const SampleSet& samples, const Probs& target, double eps, const VVConfig& cfg) {
    auto part = vv_partition(target, eps);
    auto M = part.M();
    std::vector<double> pm;
    for (auto i : M) pm.push_back(target[i]);
    const double k = double(samples.samples.size());
    double thr = cfg.constant * std::pow(k, cfg.k_exponent) * std::pow(l23_quasinorm(pm), cfg.norm_exponent);
    double stat = chi23_statistic(samples, target, M);
    if (stat > thr) return {false, stat, thr};
    auto X = samples.counts();
    double tail = 0;
    for (auto i : part.S()) tail += double(X[i]);
    double tthr = 3 * eps * k / 16;
    if (tail > tthr) return {false, tail, tthr};
    return {true, stat, thr};
}

double xeb_fidelity(const SampleSet& samples, const Probs& target) {
    const double D = double(target.size());
    double s = 0;
    for (auto x : samples.samples) s += D * target.at(x) - 1.0;
    return s / double(samples.samples.size());
}

namespace {
double entropy_nats(const Probs& p) {
    double h = 0;
    for (double x : p)
        if (x > 0) h -= x * std::log(x);
    return h;
}
}  // namespace

double ce_difference(const SampleSet& samples, const Probs& target, bool bits) {
    double s = 0;
    for (auto x : samples.samples) {
        double p = target.at(x);
        if (p <= 0) return kInfinity;
        s -= std::log(p);
    }
    double d = s / double(samples.samples.size()) - entropy_nats(target);
    return bits ? d / std::log(2.0) : d;
}

double lower_median(const Probs& p) {
    std::vector<double> v(p);
    std::size_t k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + k, v.end());
    return v[k];
}

double hog_fidelity(const SampleSet& samples, const Probs& target) {
    double med = lower_median(target);
    std::size_t heavy = 0;
    for (auto x : samples.samples)
        if (target.at(x) >= med) ++heavy;
    double frac = double(heavy) / double(samples.samples.size());
    return 2.0 / std::log(2.0) * (frac - 0.5);
}

bool hog_check(const SampleSet& samples, const Probs& target) {
    double med = lower_median(target);
    std::size_t heavy = 0;
    for (auto x : samples.samples)
        if (target.at(x) >= med) ++heavy;
    return 3 * heavy >= 2 * samples.samples.size();
}

double bog_distance(const SampleSet& samples, const Probs& target, int m_bins) {
    if (m_bins < 1) throw ConfigError("bog: m_bins >= 1");
    if (m_bins == 1) return 0.0;
    auto edges = pt_sample_bin_edges(m_bins, double(target.size()));
    std::vector<double> frac(m_bins, 0.0);
    for (auto x : samples.samples) frac[pt_bin(target.at(x), edges)] += 1.0;
    double s = 0;
    for (double f : frac) s += std::fabs(f / double(samples.samples.size()) - 1.0 / m_bins);
    return 0.5 * s;
}

double xeb_exact(const Probs& Q, const Probs& target) {
    double s = 0;
    for (std::size_t i = 0; i < Q.size(); ++i) s += Q[i] * target[i];
    return double(target.size()) * s - 1.0;
}

double ce_difference_exact(const Probs& Q, const Probs& target, bool bits) {
    double s = 0;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        if (Q[i] <= 0) continue;
        if (target[i] <= 0) return kInfinity;
        s -= Q[i] * std::log(target[i]);
    }
    double d = s - entropy_nats(target);
    return bits ? d / std::log(2.0) : d;
}

double hog_fidelity_exact(const Probs& Q, const Probs& target) {
    double med = lower_median(target);
    double heavy = 0;
    for (std::size_t i = 0; i < Q.size(); ++i)
        if (target[i] >= med) heavy += Q[i];
    return 2.0 / std::log(2.0) * (heavy - 0.5);
}

double bog_distance_exact(const Probs& Q, const Probs& target, int m_bins) {
    if (m_bins <= 1) return 0.0;
    auto edges = pt_sample_bin_edges(m_bins, double(target.size()));
    std::vector<double> frac(m_bins, 0.0);
    for (std::size_t i = 0; i < Q.size(); ++i) frac[pt_bin(target[i], edges)] += Q[i];
    double s = 0;
    for (double f : frac) s += std::fabs(f - 1.0 / m_bins);
    return 0.5 * s;
}

double row_norm(const CMat& X) {
    const int n = int(X.rows());
    if (X.cols() != n) throw ConfigError("row_norm: square matrix required");
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= X.row(i).squaredNorm() / n;
    return r;
}

RowNormReference row_norm_reference(int n, int draws, Rng& rng) {
    if (n < 1 || draws < 1) throw ConfigError("row norm reference: n, draws >= 1");
    double ge = 0, dev = 0;
    for (int t = 0; t < draws; ++t) {
        double r = row_norm(ginibre(n, n, rng));
        ge += r >= 1.0;
        dev += std::fabs(r - 1.0);
    }
    return {ge / draws, 0.5 * dev / draws};
}

RowNormVerdict row_norm_discriminator(const std::vector<CMat>& submatrices, const RowNormReference& ref) {
    if (submatrices.empty()) throw ConfigError("row norm discriminator: no samples");
    double ge = 0;
    for (const auto& X : submatrices) ge += row_norm(X) >= 1.0;
    const double stat = ge / double(submatrices.size()) - ref.p_at_least_one;
    return {stat > ref.gap / 2, stat, ref.gap / 2};
}

double depolarization_estimate(double xeb_avg, int /*n*/, double moment_sum) {
    if (!(moment_sum > 0)) throw NumericalError("depolarization: nonpositive moment sum");
    return xeb_avg / moment_sum;
}

Probs xprogram_distribution(const std::vector<std::vector<int>>& P, double theta) {
    if (P.empty()) throw ConfigError("xprogram: empty program");
    const int n = int(P[0].size());
    if (n > 20) throw CapExceeded("xprogram: too many qubits");
    const std::uint64_t dim = 1ULL << n;
    CVec a = CVec::Zero(dim), b(dim);
    a[0] = 1.0;
    const double c = std::cos(theta), sn = std::sin(theta);
    for (const auto& row : P) {
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j)
            if (row[j]) mask |= 1ULL << j;
        // exp(i theta X^row) = cos + i sin X^row
        for (std::uint64_t x = 0; x < dim; ++x) b[x] = c * a[x] + cplx(0, sn) * a[x ^ mask];
        a.swap(b);
    }
    Probs p(dim);
    for (std::uint64_t x = 0; x < dim; ++x) p[x] = std::norm(a[x]);
    return p;
}

XProgramBias xprogram_bias(const std::vector<std::vector<int>>& P, double theta, const std::vector<int>& s) {
    const int n = int(s.size());
    auto p = xprogram_distribution(P, theta);
    std::uint64_t smask = 0;
    for (int j = 0; j < n; ++j)
        if (s[j]) smask |= 1ULL << j;
    double bf = 0;
    for (std::uint64_t x = 0; x < p.size(); ++x)
        if (popcount(x & smask) % 2 == 0) bf += p[x];

    std::vector<std::uint64_t> rows;  // rows of P_s
    for (const auto& row : P) {
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j)
            if (row[j]) mask |= 1ULL << j;
        if (popcount(mask & smask) % 2 == 1) rows.push_back(mask);
    }
    const int ns = int(rows.size());
    double avg = 0;
    const std::uint64_t dim = 1ULL << n;
    for (std::uint64_t d = 0; d < dim; ++d) {
        int wt = 0;
        for (auto r : rows) wt += popcount(r & d) % 2;
        double cs = std::cos(theta * (ns - 2 * wt));
        avg += cs * cs;
    }
    return {bf, avg / double(dim)};
}

}  // namespace qrs
