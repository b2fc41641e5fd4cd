#pragma once

#include <vector>

#include "otfs/types.hpp"

namespace otfs {

// Unitary N-point DFT matrix F_N, F[l,n] = exp(-j 2 pi l n / N) / sqrt(N).
// Cached per size; the single DFT convention used everywhere in this library.
const Mat& dft_matrix(int N);

// Applies F_N (or F_N^H when inverse) to x; norm-preserving.
Vec unitary_dft(const Vec& x, bool inverse);

// Circulant matrix with first column c: A[i,j] = c[(i-j) mod N].
Mat circulant(const Vec& first_column);

// Moore-Penrose pseudo-inverse of a full-column-rank matrix via a
// rank-revealing QR factorization. Throws NumericalError (with a condition
// estimate) when G is rank deficient.
Mat least_squares_pinv(const Mat& G);

// Zadoff-Chu sequence z[i] = amplitude * exp(-j pi mu i (i+1) (2q+1) / L).
// The user index q enters through the odd factor (2q+1); validity requires
// gcd(L, mu*(2q+1) mod L) = 1.
struct ZcSequence {
    int length = 0;      // L_p
    int root = 1;        // mu
    int user = 0;        // q
    double amplitude = 1.0;
    Vec samples;
};

ZcSequence zadoff_chu(int L_p, int mu, int q, double amplitude);

// Effective sequence factor for user q: the q-th odd residue coprime with L_p
// (equals 2q+1 whenever that is itself valid). Throws when the supply of
// distinct roots is exhausted.
int zc_user_factor(int L_p, int q);

uint64_t gcd_u64(uint64_t a, uint64_t b);

}  // namespace otfs
