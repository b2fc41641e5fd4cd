#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "otfs/channel.hpp"

using namespace otfs;

namespace {

FrameParams fp(int M, int N, int Q = 1, int L_ch = 3, int theta_max = 2) {
    return make_frame_params(M, N, Q, 1e-6, L_ch, theta_max);
}

LtvChannel single_tap() {
    LtvChannel ch;
    ch.taps.push_back({Complex(1, 0), 0, 0.0});
    return ch;
}

// direct per-sample oracle of the received-signal equation
Vec scalar_oracle(const Vec& s, const LtvChannel& ch, int theta, double eps, int Ns) {
    Vec r = Vec::Zero(Ns);
    for (int k = 0; k < Ns; ++k) {
        Complex acc = 0;
        for (const auto& t : ch.taps) {
            int idx = k - t.delay - theta;
            if (idx < 0 || idx >= Ns) continue;
            acc += t.gain * std::exp(Complex(0, 2 * kPi * t.doppler * (k - t.delay))) * s[idx];
        }
        r[k] = std::exp(Complex(0, 2 * kPi * eps * k / Ns)) * acc;
    }
    return r;
}

}  // namespace

TEST_CASE("channel generation basics") {
    FrameParams p = fp(16, 8);
    Rng rng(1);

    // zero Doppler spread means static taps
    auto ch = generate_channel(Profile::UniformSynthetic, 0.0, 3, p, rng);
    for (const auto& t : ch.taps) CHECK(t.doppler == 0.0);
    CHECK(ch.total_power() == doctest::Approx(1.0).epsilon(1e-12));

    // single-tap synthetic profile
    auto ch1 = generate_channel(Profile::UniformSynthetic, 0.0, 1, p, rng);
    CHECK(ch1.taps.size() == 1);
    CHECK(ch1.taps[0].delay == 0);
    CHECK(std::abs(ch1.taps[0].gain) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("EVA at 3.84 MHz quantizes into bins 0..9") {
    FrameParams p = make_frame_params(128, 32, 1, 1.0 / 3.84e6, 10, 8);
    Rng rng(2);
    std::set<int> bins;
    for (int rep = 0; rep < 20; ++rep) {
        auto ch = generate_channel(Profile::Eva, 2.91, 10, p, rng);
        for (const auto& t : ch.taps) bins.insert(t.delay);
        CHECK(ch.length() <= 10);
        // Doppler magnitudes bounded by kappa_max / MN
        for (const auto& t : ch.taps)
            CHECK(std::abs(t.doppler) <= 2.91 / p.mn() + 1e-15);
    }
    for (int b : bins) CHECK((b >= 0 && b <= 9));

    // rejecting a frame too small for the profile
    FrameParams tight = make_frame_params(128, 32, 1, 1.0 / 3.84e6, 4, 2);
    CHECK_THROWS_AS(generate_channel(Profile::Eva, 0.0, 4, tight, rng), ConfigError);
}

TEST_CASE("apply_channel trivial and delay cases") {
    FrameParams p = fp(8, 4);
    Rng rng(3);
    Vec s(p.n_samples());
    for (int i = 0; i < s.size(); ++i) s[i] = rng.cgaussian();

    ImpairmentSet none;
    CHECK((apply_channel(s, single_tap(), none, p, rng) - s).cwiseAbs().maxCoeff() == 0.0);

    ImpairmentSet d3;
    d3.theta = 2;
    Vec r = apply_channel(s, single_tap(), d3, p, rng);
    for (int k = 2; k < p.n_samples(); ++k) CHECK(r[k] == s[k - 2]);
    CHECK(r[0] == Complex(0, 0));

    // CFO only, checked against an independent per-sample loop
    ImpairmentSet cf;
    cf.eps = 0.37;
    Vec rc = apply_channel(s, single_tap(), cf, p, rng);
    Vec oracle = scalar_oracle(s, single_tap(), 0, 0.37, p.n_samples());
    CHECK((rc - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_channel enforces the quasi-synchronous precondition") {
    FrameParams p = fp(8, 4, 1, 3, 2);  // L_cp = 4
    Rng rng(4);
    Vec s = Vec::Zero(p.n_samples());
    LtvChannel ch;
    ch.taps.push_back({Complex(1, 0), 3, 0.0});
    ImpairmentSet imp;
    imp.theta = 2;  // 2 + 3 > L_cp = 4
    CHECK_THROWS_AS(apply_channel(s, ch, imp, p, rng), ConfigError);
    imp.theta = 1;  // boundary 1 + 3 = 4 admissible
    CHECK_NOTHROW(apply_channel(s, ch, imp, p, rng));
}

TEST_CASE("general LTV application matches the scalar oracle") {
    FrameParams p = fp(8, 4);
    Rng rng(5);
    Vec s(p.n_samples());
    for (int i = 0; i < s.size(); ++i) s[i] = rng.cgaussian();
    auto ch = generate_channel(Profile::UniformSynthetic, 1.7, 3, p, rng);
    ImpairmentSet imp;
    imp.theta = 1;
    imp.eps = -0.23;
    Vec r = apply_channel(s, ch, imp, p, rng);
    CHECK((r - scalar_oracle(s, ch, 1, -0.23, p.n_samples())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("CFO folds into the channel as a common Doppler shift") {
    FrameParams p = fp(8, 4);
    Rng rng(6);
    Vec s(p.n_samples());
    for (int i = 0; i < s.size(); ++i) s[i] = rng.cgaussian();
    auto ch = generate_channel(Profile::UniformSynthetic, 1.1, 3, p, rng);

    double eps = 0.41;
    double delta = eps / p.n_samples();
    ImpairmentSet with_cfo;
    with_cfo.eps = eps;

    LtvChannel folded = ch;
    for (auto& t : folded.taps) {
        t.gain *= std::exp(Complex(0, 2 * kPi * delta * t.delay));
        t.doppler += delta;
    }
    ImpairmentSet none;
    Vec a = apply_channel(s, ch, with_cfo, p, rng);
    Vec b = apply_channel(s, folded, none, p, rng);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("awgn variance and power accounting") {
    Rng rng(7);
    Vec x = Vec::Zero(100000);
    CHECK((add_awgn(x, 0.0, rng) - x).norm() == 0.0);
    Vec y = add_awgn(x, 1.0, rng);
    double var = y.squaredNorm() / 1e5;
    CHECK(std::abs(var - 1.0) < 0.02);  // 3-sigma bound at 1e5 samples

    // SNR definition: sigma_eta^2 = 10^(-SNR/10) with unit signal power
    CHECK(std::pow(10.0, -20.0 / 10.0) == doctest::Approx(0.01));

    CHECK_THROWS_AS(add_awgn(x, -1.0, rng), ConfigError);
}

TEST_CASE("power conservation in expectation across realizations") {
    FrameParams p = fp(16, 8);
    Rng rng(8);
    Vec s(p.n_samples());
    for (int i = 0; i < s.size(); ++i) s[i] = rng.cgaussian();
    double ratio = 0;
    const int reps = 400;
    for (int rep = 0; rep < reps; ++rep) {
        auto ch = generate_channel(Profile::UniformSynthetic, 1.0, 3, p, rng);
        ImpairmentSet imp;
        Vec r = apply_channel(s, ch, imp, p, rng);
        ratio += r.squaredNorm() / s.squaredNorm() / reps;
    }
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("mean delay worked examples") {
    LtvChannel a;
    a.taps.push_back({Complex(1, 0), 0, 0.0});
    CHECK(mean_delay(a) == 0);

    LtvChannel b;
    b.taps.push_back({Complex(1, 0), 0, 0.0});
    b.taps.push_back({Complex(1, 0), 4, 0.0});
    CHECK(mean_delay(b) == 2);

    LtvChannel c;
    c.taps.push_back({std::sqrt(0.9) * Complex(1, 0), 1, 0.0});
    c.taps.push_back({std::sqrt(0.1) * Complex(1, 0), 9, 0.0});
    CHECK(mean_delay(c) == 1);  // floor(1.8)

    CHECK_THROWS_AS(mean_delay(LtvChannel{}), ConfigError);
}

TEST_CASE("compound matrix equals the sample-loop pipeline") {
    Rng rng(9);
    for (auto [M, N] : {std::pair{8, 4}, std::pair{16, 8}}) {
        for (int Q : {1, 2}) {
            FrameParams p = fp(M, N, Q);
            std::vector<LtvChannel> chans;
            std::vector<ImpairmentSet> imps;
            std::vector<AllocationPair> allocs;
            Vec r = Vec::Zero(p.n_samples());
            Vec d = Vec::Zero(p.mn());
            for (int q = 0; q < Q; ++q) {
                chans.push_back(generate_channel(Profile::UniformSynthetic, 0.9, 3, p, rng));
                ImpairmentSet imp;
                imp.theta = rng.uniform_int(0, p.theta_max);
                imp.eps = rng.uniform(-0.5, 0.5);
                imps.push_back(imp);
                allocs.push_back(build_allocation(Scheme::GbbmaDelay, q, p, M, N / Q));
                Mat blk(M, N / Q);
                for (int i = 0; i < M; ++i)
                    for (int j = 0; j < N / Q; ++j) blk(i, j) = rng.cgaussian();
                Mat D = map_data(blk, allocs.back());
                auto frame = otfs_modulate(D, p);
                r += apply_channel(frame.with_cp, chans[q], imps[q], p, rng);
                d += Eigen::Map<const Vec>(D.data(), p.mn());
            }
            Mat psi = compound_channel_matrix(chans, imps, allocs, p);
            Vec lhs = psi * d;
            Vec rhs = remove_cp_and_demap(r, p, p.theta_max);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("compound matrix with identity channel restricts to allocated bins") {
    FrameParams p = fp(8, 4, 1);
    std::vector<LtvChannel> chans = {single_tap()};
    std::vector<ImpairmentSet> imps = {ImpairmentSet{}};
    std::vector<AllocationPair> allocs = {build_allocation(Scheme::GbbmaDelay, 0, p, 8, 4)};
    Mat psi = compound_channel_matrix(chans, imps, allocs, p);
    CHECK((psi - Mat::Identity(p.mn(), p.mn())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("static channel gives block-diagonal phased-circulant structure") {
    // One frame-level CP makes the static delay-time operator circulant over
    // the combined index, i.e. block-circulant across slots. In the
    // delay-Doppler domain that is block-diagonal with per-Doppler blocks
    // D_k[l, l'] = h[(l-l') mod M] * exp(-j 2 pi k / N) on the wrapped part.
    FrameParams p = fp(8, 4, 1);
    Rng rng(10);
    std::vector<LtvChannel> chans = {generate_channel(Profile::UniformSynthetic, 0.0, 3, p, rng)};
    std::vector<ImpairmentSet> imps = {ImpairmentSet{}};
    std::vector<AllocationPair> allocs = {build_allocation(Scheme::GbbmaDelay, 0, p, 8, 4)};
    Mat psi = compound_channel_matrix(chans, imps, allocs, p);
    const int M = 8, N = 4;
    for (int b = 0; b < N; ++b) {
        for (int c = 0; c < N; ++c)
            if (c != b)
                CHECK(psi.block(b * M, c * M, M, M).cwiseAbs().maxCoeff() < 1e-10);
        Mat blk = psi.block(b * M, b * M, M, M);
        Complex omega = std::exp(Complex(0, -2.0 * kPi * b / N));
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                Complex expect = blk(mod(i - j, M), 0) * (i >= j ? Complex(1, 0) : omega);
                CHECK(std::abs(blk(i, j) - expect) < 1e-10);
            }
        // the Doppler-DC block is exactly circulant
        if (b == 0)
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j)
                    CHECK(std::abs(blk(i, j) - blk(mod(i - j, M), 0)) < 1e-10);
    }
}
