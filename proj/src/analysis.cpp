#include "qrs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrs {

Probs validate_probs(const Probs& p) {
    Probs q(p);
    double s = 0;
    for (auto& x : q) {
        if (x < -1e-12) throw ConfigError("probability vector has a negative entry");
        if (x < 0) x = 0;
        s += x;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw ConfigError("probability vector does not sum to 1");
    return q;
}

double porter_thomas_pdf(double p, double D) {
    if (p < 0 || p > 1) return 0.0;
    if (D == 2) return 1.0;
    return (D - 1) * std::pow(1 - p, D - 2);
}

double porter_thomas_pdf_asymptotic(double p, double D) { return p < 0 ? 0.0 : D * std::exp(-D * p); }

Probs porter_thomas_vector(int D) {
    Probs p(D);
    double s = 0;
    for (int i = 0; i < D; ++i) {
        p[i] = -std::log(1.0 - (i + 0.5) / D) / D;
        s += p[i];
    }
    for (auto& x : p) x /= s;
    return p;
}

double anticonc_fraction(const Probs& p, double alpha) {
    if (!(alpha > 0)) throw ConfigError("anticoncentration: alpha must be positive");
    const double thr = alpha / double(p.size());
    std::size_t c = 0;
    for (double x : p)
        if (x >= thr) ++c;
    return double(c) / double(p.size());
}

double tv_distance(const Probs& p, const Probs& q) {
    if (p.size() != q.size()) throw ConfigError("tv_distance: outcome spaces differ");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

std::vector<double> pt_bin_edges(int m, double D) {
    if (m < 1) throw ConfigError("pt bins: m >= 1");
    std::vector<double> e(m + 1);
    e[0] = 0.0;
    for (int i = 1; i < m; ++i) e[i] = -std::log(1.0 - double(i) / m) / D;
    e[m] = 1.0;
    return e;
}

std::vector<double> pt_sample_bin_edges(int m, double D) {
    if (m < 1) throw ConfigError("pt bins: m >= 1");
    std::vector<double> e(m + 1);
    e[0] = 0.0;
    for (int i = 1; i < m; ++i) {
        // solve (1 + u) exp(-u) = 1 - i/m by Newton from the exponential quantile
        const double q = 1.0 - double(i) / m;
        double u = -std::log(q) + 1.0;
        for (int it = 0; it < 100; ++it) {
            double f = (1 + u) * std::exp(-u) - q, df = -u * std::exp(-u);
            double step = f / df;
            u = std::max(u - step, 0.5 * u);
            if (std::fabs(step) < 1e-15 * std::max(1.0, u)) break;
        }
        e[i] = u / D;
    }
    e[m] = 1.0;
    return e;
}

int pt_bin(double p, const std::vector<double>& edges) {
    const int m = int(edges.size()) - 1;
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, p);
    return std::min(int(it - edges.begin()) - 1, m - 1);
}

double tv_to_porter_thomas(const Probs& p, int m_bins) {
    if (m_bins < 2) throw ConfigError("tv_to_porter_thomas: m_bins >= 2");
    auto edges = pt_bin_edges(m_bins, double(p.size()));
    std::vector<double> frac(m_bins, 0.0);
    for (double x : p) frac[pt_bin(x, edges)] += 1.0;
    double s = 0;
    for (double f : frac) s += std::fabs(f / double(p.size()) - 1.0 / m_bins);
    return 0.5 * s;
}

int default_pt_bins(int n_qubits) { return std::min<int>(int((1LL << n_qubits) / 5), 100); }

double shannon_entropy(const Probs& p) {
    double h = 0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

double min_entropy(const Probs& p) { return -std::log2(*std::max_element(p.begin(), p.end())); }

double renyi_entropy(const Probs& p, double alpha) {
    if (alpha < 0) throw ConfigError("renyi: alpha >= 0");
    if (std::isinf(alpha)) return min_entropy(p);
    if (alpha == 1.0) return shannon_entropy(p);
    double s = 0;
    for (double x : p)
        if (x > 0) s += std::pow(x, alpha);
    return std::log2(s) / (1.0 - alpha);
}

std::vector<double> TruncatedVector::sorted() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < values.size(); ++i) {
        bool gone = (i == removed_max);
        if (!gone)
            for (auto r : removed_tail)
                if (r == i) gone = true;
        if (!gone) v.push_back(values[i]);
    }
    std::sort(v.rbegin(), v.rend());
    return v;
}

TruncatedVector truncate(const Probs& p, double eps) {
    if (eps < 0 || eps >= 1) throw ConfigError("truncate: eps in [0,1)");
    TruncatedVector t;
    t.values = p;
    if (p.empty()) return t;
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    // the largest entry (last in ascending order; ties resolved towards the higher index)
    std::size_t imax = order.back();
    double removed = 0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        std::size_t i = order[k];
        if (removed + p[i] > eps) break;
        removed += p[i];
        t.removed_tail.push_back(i);
        t.values[i] = 0;
    }
    t.removed_max = imax;
    t.max_value = p[imax];
    t.values[imax] = 0;
    t.removed_weight = removed;
    return t;
}

double l23_quasinorm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += std::cbrt(std::fabs(x) * std::fabs(x));
    return std::pow(s, 1.5);
}

SampleBounds vv_sample_bounds(const Probs& p, double eps) {
    if (!(eps > 0)) throw ConfigError("vv bounds: eps > 0");
    auto norm_at = [&](double e) { return e < 1 ? l23_quasinorm(truncate(p, e).values) : 0.0; };
    double lo = std::max(1.0 / eps, norm_at(2 * eps) / (eps * eps));
    double hi = std::max(1.0 / eps, norm_at(eps / 16) / (eps * eps));
    return {lo, hi};
}

double second_moment_min_entropy_bound(double second_moment_sum, double delta) {
    if (!(second_moment_sum > 0) || !(delta > 0)) throw ConfigError("min-entropy bound: positive inputs");
    return 0.5 * (std::log2(delta) - std::log2(second_moment_sum));
}

Tradeoff supremacy_tradeoff(double gamma, double delta) {
    if (!(delta > 0 && delta < 1) || !(gamma > 0 && gamma <= 1)) throw ConfigError("tradeoff: domain");
    return {delta / 4.0, gamma * (1.0 - delta)};
}

}  // namespace qrs
