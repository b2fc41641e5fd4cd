#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "otfs/frame.hpp"

using namespace otfs;

namespace {

FrameParams fp(int M, int N, int Q, int L_cp = 4, int theta_max = 2) {
    FrameParams p;
    p.M = M; p.N = N; p.Q = Q;
    p.delta_tau = 1e-6;
    p.L_cp = L_cp;
    p.theta_max = theta_max;
    p.validate();
    return p;
}

void check_partition(Scheme s, int M, int N, int Q, int M_q, int N_q) {
    FrameParams p = fp(M, N, Q);
    std::set<std::pair<int, int>> cells;
    for (int q = 0; q < Q; ++q) {
        auto a = build_allocation(s, q, p, M_q, N_q);
        for (int l : a.delay_bins)
            for (int k : a.doppler_bins) {
                auto ins = cells.insert({l, k});
                CHECK(ins.second);  // pairwise disjoint
            }
    }
    CHECK(static_cast<int>(cells.size()) == M * N);  // complete cover
}

}  // namespace

TEST_CASE("single user owns the whole grid under any scheme") {
    FrameParams p = fp(8, 4, 1);
    for (Scheme s : {Scheme::GbbmaDelay, Scheme::GbbmaDoppler, Scheme::Itfma, Scheme::Iddma}) {
        auto a = build_allocation(s, 0, p, 8, 4);
        CHECK(a.delay_bins.size() == 8);
        CHECK(a.doppler_bins.size() == 4);
        CHECK((a.gamma_tau() - RealMat::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.gamma_nu() - RealMat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("delay-domain allocation selects interleaved Doppler rows") {
    // M=4, N=4, Q=2, q=0: Doppler rows {0, 2} per I_2 (x) [1, 0]
    FrameParams p = fp(4, 4, 2);
    auto a = build_allocation(Scheme::GbbmaDelay, 0, p, 4, 2);
    CHECK(a.doppler_bins == std::vector<int>{0, 2});
    CHECK(a.delay_bins.size() == 4);
    auto b = build_allocation(Scheme::GbbmaDelay, 1, p, 4, 2);
    CHECK(b.doppler_bins == std::vector<int>{1, 3});
}

TEST_CASE("all schemes tile the grid disjointly and completely") {
    check_partition(Scheme::GbbmaDelay, 8, 8, 4, 8, 2);
    check_partition(Scheme::GbbmaDoppler, 8, 8, 4, 2, 8);
    check_partition(Scheme::Itfma, 8, 8, 4, 4, 4);
    check_partition(Scheme::Iddma, 8, 8, 4, 4, 4);
    check_partition(Scheme::Itfma, 12, 6, 6, 4, 3);
    check_partition(Scheme::Iddma, 12, 6, 6, 4, 3);
}

TEST_CASE("scheme/size mismatches are rejected") {
    FrameParams p = fp(8, 6, 4);
    CHECK_THROWS_AS(build_allocation(Scheme::GbbmaDelay, 0, p, 8, 2), ConfigError);
    CHECK_THROWS_AS(build_allocation(Scheme::Itfma, 0, p, 8, 6), ConfigError);
}

TEST_CASE("explicit allocations validate their index sets") {
    FrameParams p = fp(8, 4, 2);
    auto a = explicit_allocation({1, 3, 5}, {0, 2}, p, 0);
    CHECK(a.delay_bins.size() == 3);
    CHECK(a.gamma_tau().col(1)(3) == 1.0);
    CHECK_THROWS_AS(explicit_allocation({1, 1}, {0}, p, 0), ConfigError);   // duplicate
    CHECK_THROWS_AS(explicit_allocation({9}, {0}, p, 0), ConfigError);      // out of range
}

TEST_CASE("map_data scatters and conserves energy over users") {
    FrameParams p = fp(8, 4, 2);
    auto a0 = build_allocation(Scheme::GbbmaDelay, 0, p, 8, 2);

    // identity allocation reproduces the data
    FrameParams p1 = fp(4, 4, 1);
    auto full = build_allocation(Scheme::GbbmaDelay, 0, p1, 4, 4);
    Mat d(4, 4);
    d.setRandom();
    CHECK((map_data(d, full) - d).cwiseAbs().maxCoeff() == 0.0);

    // single symbol lands at the first selected pair
    Mat one = Mat::Zero(8, 2);
    one(0, 0) = Complex(2, -1);
    Mat D = map_data(one, a0);
    CHECK(D(a0.delay_bins[0], a0.doppler_bins[0]) == Complex(2, -1));
    CHECK(D.cwiseAbs().sum() == std::abs(Complex(2, -1)));

    // disjoint support: energies add
    Rng rng(3);
    double sum_users = 0;
    Mat total = Mat::Zero(8, 4);
    for (int q = 0; q < 2; ++q) {
        auto a = build_allocation(Scheme::GbbmaDelay, q, p, 8, 2);
        Mat blk(8, 2);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 2; ++j) blk(i, j) = rng.cgaussian();
        sum_users += blk.squaredNorm();
        total += map_data(blk, a);
    }
    CHECK(total.squaredNorm() == doctest::Approx(sum_users).epsilon(1e-12));

    CHECK_THROWS_AS(map_data(Mat::Zero(3, 3), a0), ConfigError);
}

TEST_CASE("otfs modulation: DC Doppler bin, energy, linearity, round trip") {
    FrameParams p = fp(8, 4, 1);

    Mat D = Mat::Zero(8, 4);
    D(5, 0) = Complex(1.5, -0.5);  // single nonzero at Doppler bin 0
    auto f = otfs_modulate(D, p);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(f.delay_time(5, n) - D(5, 0) / 2.0) < 1e-14);  // /sqrt(N)

    Rng rng(1);
    Mat D1(8, 4), D2(8, 4);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) { D1(i, j) = rng.cgaussian(); D2(i, j) = rng.cgaussian(); }
    CHECK(otfs_modulate(D1, p).delay_time.squaredNorm() ==
          doctest::Approx(D1.squaredNorm()).epsilon(1e-12));

    Complex alpha(0.3, -1.1);
    Mat lhs = otfs_modulate(alpha * D1 + D2, p).delay_time;
    Mat rhs = alpha * otfs_modulate(D1, p).delay_time + otfs_modulate(D2, p).delay_time;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

    // serialized energy equals grid energy
    CHECK(otfs_modulate(D1, p).serialized.squaredNorm() ==
          doctest::Approx(D1.squaredNorm()).epsilon(1e-12));

    // CP prefix replicates the tail
    auto f1 = otfs_modulate(D1, p);
    CHECK((f1.with_cp.head(p.L_cp) - f1.serialized.tail(p.L_cp)).norm() == 0.0);

    // demodulate(modulate(D)) = D without a channel
    Vec d_rt = remove_cp_and_demap(f1.with_cp, p, 0);
    Eigen::Map<const Mat> Drt(d_rt.data(), 8, 4);
    CHECK((Drt - D1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("CP add/remove matrices compose to the identity") {
    for (auto [M, N] : {std::pair{4, 4}, std::pair{8, 8}}) {
        FrameParams p = fp(M, N, 1, 3, 0);
        const int MN = p.mn();
        RealMat Acp = RealMat::Zero(p.n_samples(), MN);
        for (int i = 0; i < p.L_cp; ++i) Acp(i, MN - p.L_cp + i) = 1.0;
        for (int i = 0; i < MN; ++i) Acp(p.L_cp + i, i) = 1.0;
        RealMat Rcp = RealMat::Zero(MN, p.n_samples());
        for (int i = 0; i < MN; ++i) Rcp(i, p.L_cp + i) = 1.0;
        CHECK((Rcp * Acp - RealMat::Identity(MN, MN)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("remove_cp_and_demap output length and length checking") {
    FrameParams p = fp(8, 4, 1, 5, 2);
    Vec y = Vec::Random(p.mn() + p.L_cp - p.theta_max);
    CHECK(remove_cp_and_demap(y, p, p.theta_max).size() == p.mn());
    Vec small = Vec::Random(p.mn() - 1);
    CHECK_THROWS_AS(remove_cp_and_demap(small, p, p.theta_max), ConfigError);
}

TEST_CASE("qam constellations are gray coded with unit average energy") {
    for (int order : {4, 16, 64}) {
        auto pts = qam_constellation(order);
        double e = 0;
        for (auto& s : pts) e += std::norm(s);
        CHECK(e / order == doctest::Approx(1.0).epsilon(1e-12));
    }
    // adjacent gray indices along one axis differ in one bit position only;
    // spot-check the 16-QAM level ordering instead of a full bit audit
    auto pts = qam_constellation(16);
    std::set<long long> uniq;
    for (auto& s : pts)
        uniq.insert(llround(s.real() * 1e6) * 100000000LL + llround(s.imag() * 1e6));
    CHECK(uniq.size() == 16);

    Rng rng(4);
    Vec sym = draw_qam(4000, 16, rng);
    double mean_e = sym.squaredNorm() / 4000.0;
    CHECK(mean_e == doctest::Approx(1.0).epsilon(0.1));
}
