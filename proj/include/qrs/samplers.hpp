#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qrs/circuit.hpp"
#include "qrs/core.hpp"

namespace qrs {

struct SampleSet {
    std::uint64_t n_outcomes = 0;
    std::vector<std::uint64_t> samples;

    std::vector<std::uint64_t> counts() const;
    void validate() const;
};

struct DiscreteDistribution {
    std::uint64_t outcome_count = 0;
    std::function<double(std::uint64_t)> prob;
    // marginal over the first k bits (bit 0 first), prefix given as an integer of k bits
    std::function<double(std::uint64_t prefix, int k)> marginal;
    std::function<std::uint64_t(Rng&)> draw;  // needed when used as a proposal

    static DiscreteDistribution from_probs(const Probs& p);
};

class CdfTable {
public:
    explicit CdfTable(const Probs& p);
    std::uint64_t draw(Rng& rng) const;

private:
    std::vector<double> cdf_;
};

struct RejectionResult {
    std::uint64_t outcome;
    std::uint64_t iterations;
};

RejectionResult rejection_sample(const DiscreteDistribution& target, const DiscreteDistribution& proposal,
                                 double c, Rng& rng, double cap_factor = 1e6);

std::uint64_t marginal_sample(const DiscreteDistribution& dist, int n_bits, Rng& rng);
// marginals of an enumerable vector by explicit summation
DiscreteDistribution with_summed_marginals(const Probs& p, int n_bits);

SampleSet inverse_cdf_sample(const Probs& probs, std::size_t count, Rng& rng);

template <class State>
struct MarkovProposal {
    std::function<State(const State&, Rng&)> propose;
    std::function<double(const State& to, const State& from)> density;  // q(to|from)
};

inline double metropolis_acceptance(double f_new, double f_old, double q_back, double q_fwd) {
    if (f_old <= 0) return 1.0;
    double r = (f_new * q_back) / (f_old * q_fwd);
    return r < 1.0 ? r : 1.0;
}

struct ChainStats {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;
};

// Records M states after burn_in steps; rejected moves repeat the current state.
template <class State>
std::vector<State> metropolis_chain(const std::function<double(const State&)>& f,
                                    const MarkovProposal<State>& proposal, State x0, std::size_t M,
                                    std::size_t burn_in, Rng& rng, ChainStats* stats = nullptr) {
    State x = std::move(x0);
    double fx = f(x);
    if (!(fx > 0)) throw ConfigError("metropolis_chain: f(x0) must be positive");
    std::vector<State> out;
    out.reserve(M);
    for (std::size_t step = 0; step < burn_in + M; ++step) {
        State y = proposal.propose(x, rng);
        double fy = f(y);
        double a = metropolis_acceptance(fy, fx, proposal.density(x, y), proposal.density(y, x));
        if (stats) ++stats->proposed;
        if (rng.uniform() < a) {
            x = std::move(y);
            fx = fy;
            if (stats) ++stats->accepted;
        }
        if (step >= burn_in) out.push_back(x);
    }
    return out;
}

// Spectral gap 1 - |lambda_2| of a row-stochastic transition matrix (small N only)
double transition_gap(const RMat& P);

}  // namespace qrs
