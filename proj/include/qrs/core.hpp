#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Error taxonomy; the CLI maps these onto exit codes.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Counter-based generator: output k is a SplitMix64 finalizer of key + k*gamma.
// Streams are derived with split(i), which never touches the parent's counter.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() { return next(); }

    std::uint64_t next() { return mix(key_ + kGamma * (++ctr_)); }

    Rng split(std::uint64_t stream) const {
        Rng r;
        r.key_ = mix(key_ ^ mix(stream + 0x243f6a8885a308d3ULL));
        r.ctr_ = 0;
        return r;
    }

    // uniform in [0,1)
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (next() >> 63) != 0; }

    double normal();
    cplx complex_normal();  // E|z|^2 = 1

    std::uint64_t counter() const { return ctr_; }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t key_ = 0;
    std::uint64_t ctr_ = 0;
};

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

inline int bit(std::uint64_t x, int k) { return int((x >> k) & 1ULL); }

}  // namespace qrs
