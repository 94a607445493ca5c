#include "qrs/core.hpp"

#include <cmath>

namespace qrs {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    // Lemire's multiply-shift with rejection
    unsigned __int128 m = (unsigned __int128)next() * n;
    std::uint64_t lo = std::uint64_t(m);
    if (lo < n) {
        std::uint64_t t = (0 - n) % n;
        while (lo < t) {
            m = (unsigned __int128)next() * n;
            lo = std::uint64_t(m);
        }
    }
    return std::uint64_t(m >> 64);
}

double Rng::normal() {
    // Box-Muller without caching keeps the stream position a pure function of call count
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

cplx Rng::complex_normal() {
    double a = normal(), b = normal();
    return {a / std::sqrt(2.0), b / std::sqrt(2.0)};
}

}  // namespace qrs
