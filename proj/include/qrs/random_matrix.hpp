#pragma once

#include "qrs/core.hpp"

namespace qrs {

// QR of a Ginibre matrix with the triangular factor's diagonal made positive
CMat haar_unitary(int D, Rng& rng);
RMat haar_orthogonal(int d, Rng& rng);
CMat ginibre(int rows, int cols, Rng& rng);  // iid complex normal entries, E|x|^2 = 1

// Perm(X) by Ryser's formula with Gray-code updates, O(2^n n)
cplx permanent(const CMat& X);
cplx permanent_naive(const CMat& X);

// all occupation sequences of n photons in m modes
std::vector<std::vector<int>> occupation_patterns(int m, int n);
// |Perm(U_S)|^2 / prod s_j!, U_S keeps the first n columns and repeats row j s_j times
double boson_probability(const CMat& U, const std::vector<int>& S, int n);
CMat boson_submatrix(const CMat& U, const std::vector<int>& S, int n);

}  // namespace qrs
