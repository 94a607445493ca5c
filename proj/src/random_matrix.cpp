#include "qrs/random_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrs {

CMat ginibre(int rows, int cols, Rng& rng) {
    CMat g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
    return g;
}

CMat haar_unitary(int D, Rng& rng) {
    if (D < 1) throw ConfigError("haar_unitary: D >= 1");
    CMat g = ginibre(D, D, rng);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat Q = qr.householderQ();
    const CMat& R = qr.matrixQR();
    for (int i = 0; i < D; ++i) {
        cplx d = R(i, i);
        double a = std::abs(d);
        Q.col(i) *= (a > 0 ? d / a : cplx(1.0));
    }
    return Q;
}

RMat haar_orthogonal(int d, Rng& rng) {
    if (d < 1) throw ConfigError("haar_orthogonal: d >= 1");
    RMat g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
    Eigen::HouseholderQR<RMat> qr(g);
    RMat Q = qr.householderQ();
    const RMat& R = qr.matrixQR();
    for (int i = 0; i < d; ++i)
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    return Q;
}

cplx permanent(const CMat& X) {
    const int n = int(X.rows());
    if (X.cols() != n) throw ConfigError("permanent: square matrix required");
    if (n == 0) return 1.0;
    if (n > 30) throw CapExceeded("permanent: n too large");
    // Ryser: Perm = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} x_ij
    std::vector<cplx> rowsum(n, 0.0);
    cplx total = 0;
    std::uint64_t gray = 0;
    const std::uint64_t N = 1ULL << n;
    for (std::uint64_t k = 1; k < N; ++k) {
        int j = __builtin_ctzll(k);
        std::uint64_t mask = 1ULL << j;
        gray ^= mask;
        double s = (gray & mask) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) rowsum[i] += s * X(i, j);
        cplx prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        total += (popcount(gray) % 2 ? -1.0 : 1.0) * prod;
    }
    return (n % 2 ? -1.0 : 1.0) * total;
}

cplx permanent_naive(const CMat& X) {
    const int n = int(X.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cplx total = 0;
    do {
        cplx p = 1.0;
        for (int i = 0; i < n; ++i) p *= X(i, perm[i]);
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

std::vector<std::vector<int>> occupation_patterns(int m, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m, 0);
    auto rec = [&](auto&& self, int mode, int left) -> void {
        if (mode == m - 1) {
            cur[mode] = left;
            out.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur[mode] = k;
            self(self, mode + 1, left - k);
        }
    };
    if (m > 0) rec(rec, 0, n);
    return out;
}

CMat boson_submatrix(const CMat& U, const std::vector<int>& S, int n) {
    const int m = int(U.rows());
    if (int(S.size()) != m) throw ConfigError("boson: occupation length must equal mode count");
    if (std::accumulate(S.begin(), S.end(), 0) != n) throw ConfigError("boson: occupation mismatch");
    if (m < n) throw ConfigError("boson: need m >= n");
    CMat X(n, n);
    int r = 0;
    for (int j = 0; j < m; ++j)
        for (int t = 0; t < S[j]; ++t) X.row(r++) = U.row(j).head(n);
    return X;
}

double boson_probability(const CMat& U, const std::vector<int>& S, int n) {
    CMat X = boson_submatrix(U, S, n);
    double fact = 1.0;
    for (int s : S)
        for (int k = 2; k <= s; ++k) fact *= k;
    return std::norm(permanent(X)) / fact;
}

}  // namespace qrs
