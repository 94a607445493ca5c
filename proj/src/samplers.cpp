#include "qrs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qrs {

std::vector<std::uint64_t> SampleSet::counts() const {
    std::vector<std::uint64_t> c(n_outcomes, 0);
    for (auto s : samples) ++c.at(s);
    return c;
}

void SampleSet::validate() const {
    for (auto s : samples)
        if (s >= n_outcomes) throw ConfigError("sample index outside outcome space");
}

CdfTable::CdfTable(const Probs& p) : cdf_(p.size()) {
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += std::max(p[i], 0.0);
        cdf_[i] = acc;
    }
    if (!(acc > 0)) throw ConfigError("cdf: distribution has no mass");
    for (auto& v : cdf_) v /= acc;
    cdf_.back() = 1.0;
}

std::uint64_t CdfTable::draw(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::uint64_t(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

DiscreteDistribution DiscreteDistribution::from_probs(const Probs& p) {
    auto shared = std::make_shared<Probs>(p);
    auto table = std::make_shared<CdfTable>(p);
    DiscreteDistribution d;
    d.outcome_count = p.size();
    d.prob = [shared](std::uint64_t x) { return (*shared)[x]; };
    d.draw = [table](Rng& rng) { return table->draw(rng); };
    return d;
}

RejectionResult rejection_sample(const DiscreteDistribution& target, const DiscreteDistribution& proposal,
                                 double c, Rng& rng, double cap_factor) {
    if (!(c > 0)) throw ConfigError("rejection: c must be positive");
    if (!proposal.draw) throw ConfigError("rejection: proposal cannot be sampled");
    const double cap = cap_factor * std::max(c, 1.0);
    for (std::uint64_t it = 1;; ++it) {
        if (double(it) > cap) throw NumericalError("rejection: iteration cap exceeded (envelope violated?)");
        std::uint64_t x = proposal.draw(rng);
        double q = proposal.prob(x);
        double p = target.prob(x);
        if (p > c * q * (1 + 1e-12)) throw NumericalError("rejection: envelope p <= c q violated");
        if (rng.uniform() * c * q < p) return {x, it};
    }
}

std::uint64_t marginal_sample(const DiscreteDistribution& dist, int n_bits, Rng& rng) {
    if (!dist.marginal) throw ConfigError("marginal_sample: no marginal oracle");
    std::uint64_t prefix = 0;
    double pk = 1.0;
    for (int k = 0; k < n_bits; ++k) {
        double p1 = dist.marginal(prefix | (1ULL << k), k + 1);
        double p0 = dist.marginal(prefix, k + 1);
        if (pk <= 0) {
            if (p0 + p1 > 0) throw NumericalError("marginal_sample: inconsistent marginals");
            throw NumericalError("marginal_sample: zero-probability prefix");
        }
        double cond1 = p1 / pk;
        if (std::fabs(p0 + p1 - pk) > 1e-9 * std::max(1.0, pk))
            throw NumericalError("marginal_sample: inconsistent marginals");
        if (rng.uniform() < cond1) {
            prefix |= (1ULL << k);
            pk = p1;
        } else {
            pk = p0;
        }
    }
    return prefix;
}

DiscreteDistribution with_summed_marginals(const Probs& p, int n_bits) {
    if (p.size() != (std::size_t(1) << n_bits)) throw ConfigError("marginals: size must be 2^n");
    // table[k][prefix] = marginal of the first k bits
    auto table = std::make_shared<std::vector<std::vector<double>>>(n_bits + 1);
    (*table)[n_bits] = p;
    for (int k = n_bits - 1; k >= 0; --k) {
        auto& cur = (*table)[k];
        const auto& next = (*table)[k + 1];
        cur.assign(std::size_t(1) << k, 0.0);
        for (std::size_t x = 0; x < next.size(); ++x) cur[x & ((std::size_t(1) << k) - 1)] += next[x];
    }
    DiscreteDistribution d = DiscreteDistribution::from_probs(p);
    d.marginal = [table](std::uint64_t prefix, int k) { return (*table)[k][prefix]; };
    return d;
}

SampleSet inverse_cdf_sample(const Probs& probs, std::size_t count, Rng& rng) {
    CdfTable t(probs);
    SampleSet s;
    s.n_outcomes = probs.size();
    s.samples.resize(count);
    for (auto& x : s.samples) x = t.draw(rng);
    return s;
}

double transition_gap(const RMat& P) {
    Eigen::EigenSolver<RMat> es(P);
    std::vector<double> mags;
    for (int i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(mags.rbegin(), mags.rend());
    return mags.size() > 1 ? 1.0 - mags[1] : 1.0;
}

}  // namespace qrs
