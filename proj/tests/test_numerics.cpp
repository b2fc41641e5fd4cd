#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "otfs/numerics.hpp"
#include "otfs/rng.hpp"

using namespace otfs;

namespace {

// independent O(N^2) DFT oracle
Vec naive_dft(const Vec& x, bool inverse) {
    const int N = static_cast<int>(x.size());
    Vec out = Vec::Zero(N);
    double sgn = inverse ? 1.0 : -1.0;
    for (int k = 0; k < N; ++k)
        for (int n = 0; n < N; ++n)
            out[k] += x[n] * std::exp(Complex(0, sgn * 2.0 * kPi * k * n / N));
    return out / std::sqrt(static_cast<double>(N));
}

Vec circular_convolve(const Vec& a, const Vec& b) {
    const int N = static_cast<int>(a.size());
    Vec out = Vec::Zero(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out[i] += a[j] * b[mod(i - j, N)];
    return out;
}

}  // namespace

TEST_CASE("unitary dft matches the stated examples") {
    Vec delta = Vec::Zero(4);
    delta[0] = 1.0;
    Vec f = unitary_dft(delta, false);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(f[i] - 0.5) < 1e-15);

    Vec ones = Vec::Ones(8);
    Vec g = unitary_dft(ones, false);
    CHECK(std::abs(g[0] - std::sqrt(8.0)) < 1e-12);
    for (int i = 1; i < 8; ++i) CHECK(std::abs(g[i]) < 1e-12);
}

TEST_CASE("dft round trip and unitarity against the naive oracle") {
    Rng rng(11);
    for (int N : {3, 8, 12, 32}) {
        Vec x(N);
        for (int i = 0; i < N; ++i) x[i] = rng.cgaussian();
        Vec fwd = unitary_dft(x, false);
        CHECK((fwd - naive_dft(x, false)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((unitary_dft(fwd, true) - x).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(fwd.norm() - x.norm()) < 1e-12);
    }
    CHECK_THROWS_AS(unitary_dft(Vec(), false), ConfigError);
}

TEST_CASE("zadoff-chu examples and constant amplitude") {
    ZcSequence z = zadoff_chu(5, 1, 0, 1.0);
    CHECK(std::abs(z.samples[0] - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(z.samples[1] - std::exp(Complex(0, -2.0 * kPi / 5))) < 1e-15);

    // index 0 is amplitude for any parameters
    ZcSequence z2 = zadoff_chu(11, 3, 2, 2.5);
    CHECK(std::abs(z2.samples[0] - Complex(2.5, 0)) < 1e-15);
    for (int i = 0; i < 11; ++i) CHECK(std::abs(std::abs(z2.samples[i]) - 2.5) < 1e-12);

    CHECK_THROWS_AS(zadoff_chu(10, 5, 0, 1.0), ConfigError);  // gcd(10,5) != 1
    CHECK_THROWS_AS(zadoff_chu(10, 1, 2, 1.0), ConfigError);  // factor 5 invalid
}

TEST_CASE("zadoff-chu ideal periodic autocorrelation, brute force") {
    for (int L : {5, 7, 11}) {
        ZcSequence z = zadoff_chu(L, 1, 0, 1.0);
        double r0 = 0;
        for (int i = 0; i < L; ++i) r0 += std::norm(z.samples[i]);
        for (int tau = 1; tau < L; ++tau) {
            Complex acc = 0;
            for (int i = 0; i < L; ++i)
                acc += z.samples[i] * std::conj(z.samples[mod(i + tau, L)]);
            CHECK(std::abs(acc) / r0 < 1e-10);
        }
    }
}

TEST_CASE("zadoff-chu cross-user separation for prime lengths") {
    for (int L : {5, 7, 11}) {
        for (int qa = 0; qa < 2; ++qa)
            for (int qb = qa + 1; qb < 3; ++qb) {
                ZcSequence a = zadoff_chu(L, 1, (zc_user_factor(L, qa) - 1) / 2, 1.0);
                ZcSequence b = zadoff_chu(L, 1, (zc_user_factor(L, qb) - 1) / 2, 1.0);
                double peak = 0;
                for (int tau = 0; tau < L; ++tau) {
                    Complex acc = 0;
                    for (int i = 0; i < L; ++i)
                        acc += a.samples[i] * std::conj(b.samples[mod(i + tau, L)]);
                    peak = std::max(peak, std::abs(acc));
                }
                CHECK(peak <= std::sqrt(static_cast<double>(L)) + 1e-9);
            }
    }
}

TEST_CASE("zc user factors are odd, coprime and distinct") {
    // L=10 has only four valid odd residues: 1, 3, 7, 9
    CHECK(zc_user_factor(10, 0) == 1);
    CHECK(zc_user_factor(10, 1) == 3);
    CHECK(zc_user_factor(10, 2) % 10 == 7);
    CHECK(zc_user_factor(10, 3) % 10 == 9);
    CHECK_THROWS_AS(zc_user_factor(10, 4), ConfigError);
}

TEST_CASE("pseudo-inverse identities") {
    CHECK((least_squares_pinv(Mat::Identity(3, 3)) - Mat::Identity(3, 3))
              .cwiseAbs().maxCoeff() < 1e-12);

    // orthonormal columns: pinv is the adjoint
    Mat U(4, 2);
    U << 0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5;
    CHECK((least_squares_pinv(U) - U.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(5);
    Mat G(8, 3);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = rng.cgaussian();
    Mat gi = least_squares_pinv(G);
    CHECK((gi * G - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
    Mat P = G * gi;
    CHECK((P - P.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pseudo-inverse rejects rank deficiency with a condition estimate") {
    Mat G(4, 2);
    G.col(0).setConstant(1.0);
    G.col(1).setConstant(1.0);  // duplicated column
    try {
        least_squares_pinv(G);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.condition_estimate > 1e6);
    }
}

TEST_CASE("circulant structure and convolution oracle") {
    Vec d0 = Vec::Zero(4);
    d0[0] = 1.0;
    CHECK((circulant(d0) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    Vec d1 = Vec::Zero(3);
    d1[1] = 1.0;  // cyclic down-shift
    Mat S = circulant(d1);
    CHECK(S(1, 0) == Complex(1, 0));
    CHECK(S(2, 1) == Complex(1, 0));
    CHECK(S(0, 2) == Complex(1, 0));

    Rng rng(7);
    Vec e(6), x(6);
    for (int i = 0; i < 6; ++i) { e[i] = rng.cgaussian(); x[i] = rng.cgaussian(); }
    CHECK((circulant(e) * x - circular_convolve(e, x)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("circulant diagonalization by the unitary DFT") {
    Rng rng(9);
    Vec e(8);
    for (int i = 0; i < 8; ++i) e[i] = rng.cgaussian();
    const Mat& F = dft_matrix(8);
    Mat D = F * circulant(e) * F.adjoint();
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j) CHECK(std::abs(D(i, j)) < 1e-10);
}
