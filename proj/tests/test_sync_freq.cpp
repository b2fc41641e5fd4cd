#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "otfs/receiver.hpp"

using namespace otfs;

namespace {

LinkScenario base_scenario(double kappa, int beta, bool noiseless = true) {
    LinkScenario sc;
    sc.fp = make_frame_params(128, 32, 1, 1.0 / 3.84e6, 10, 8);
    sc.kappa_max = kappa;
    sc.beta = beta;
    if (noiseless) sc.snr_db = std::numeric_limits<double>::infinity();
    return sc;
}

struct Setup {
    LinkScenario sc;
    LinkWorkspace ws;
    UplinkSignal sig;
    PilotRegionObservation obs;
    BemBasis basis;
};

Setup make_setup(double kappa, int beta, double eps, int theta, uint64_t seed,
                 int channel_len = 1) {
    Setup s{base_scenario(kappa, beta), {}, {}, {}, {}};
    s.ws = make_workspace(s.sc);
    Rng rng(seed);
    TrialDrawConfig draw;
    draw.eps_force = eps;
    draw.theta_force = theta;
    if (channel_len > 0) {
        draw.profile_override = Profile::UniformSynthetic;
        draw.channel_len_override = channel_len;
    } else {
        draw.profile_override = Profile::Eva;
    }
    s.sig = simulate_uplink(s.sc, s.ws, draw, rng);
    Eigen::Map<const Mat> R_tail(s.sig.r.data() + s.sc.fp.L_cp, 128, 32);
    Eigen::Map<const Vec> y(R_tail.data(), s.sc.fp.mn());
    s.obs = extract_pilot_region(y, theta, s.ws.layout, 0, s.sc.fp);
    s.basis = cpf_basis(s.sc.fp.n_samples(), s.obs.kappa, s.sc.effective_beta());
    return s;
}

}  // namespace

TEST_CASE("cpf basis matches the Chebyshev closed form") {
    long Ns = 101;
    std::vector<long> kappa;
    for (long k = 0; k < Ns; ++k) kappa.push_back(k);
    BemBasis b = cpf_basis(Ns, kappa, 6);

    for (size_t r = 0; r < kappa.size(); ++r) {
        double kp = (2.0 * kappa[r] - Ns + 1.0) / (Ns - 1.0);
        CHECK(b.B(r, 0) == 1.0);  // degree zero is identically one
        for (int g = 0; g < 6; ++g)
            CHECK(std::abs(b.B(r, g) - std::cos(g * std::acos(kp))) < 1e-12);
    }
    // kappa' = 1 gives 1 for every degree
    CHECK(b.B(Ns - 1, 5) == doctest::Approx(1.0).epsilon(1e-12));
    // cos(2 acos(0.5)) = -0.5
    CHECK(b.B(75, 2) == doctest::Approx(-0.5).epsilon(1e-12));

    CHECK_THROWS_AS(cpf_basis(101, {200}, 3), ConfigError);
    CHECK_THROWS_AS(cpf_basis(101, {0}, 0), ConfigError);
}

TEST_CASE("pilot region geometry follows theta and masks the frame edge") {
    Setup a = make_setup(0.0, 1, 0.0, 0, 51);
    Setup b = make_setup(0.0, 1, 0.0, 3, 52);
    // same slot/offset structure, shifted absolute indices
    CHECK(a.obs.kappa.size() >= b.obs.kappa.size());
    CHECK(b.obs.kappa[0] - a.obs.kappa[0] == 3);
    // anchor M-1 wraps: the final slot loses its tail beyond the frame
    long Ns = a.sc.fp.n_samples();
    for (long k : b.obs.kappa) CHECK(k < Ns);
    int L_pilot = a.ws.layout.pilot_len;
    CHECK(static_cast<int>(a.obs.kappa.size()) >
          (a.obs.N - 1) * L_pilot);  // most slots complete
}

TEST_CASE("regressor reproduces the received pilot region exactly") {
    // noiseless, no CFO: r_bar = G c for the true taps, since the channel lies
    // inside the static model class
    Setup s = make_setup(0.0, 1, 0.0, 2, 53, 3);
    Mat G = build_regressor(s.obs, s.basis);
    CHECK(G.cols() == s.ws.layout.pilot_len);  // beta = 1

    Vec c = Vec::Zero(G.cols());
    for (const auto& tap : s.sig.truth.channels[0].taps) c[tap.delay] += tap.gain;
    CHECK((G * c - s.obs.r_bar).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("regressor equals the per-slot circular-shift form away from wraps") {
    // centered anchor: the per-slot window never crosses the delay boundary,
    // where the circular form is the stated structure
    LinkScenario sc = base_scenario(0.0, 1);
    sc.mu_pcp_anchor = 64;
    LinkWorkspace ws = make_workspace(sc);
    Rng rng(54);
    TrialDrawConfig draw;
    draw.eps_force = 0.0;
    draw.theta_force = 2;
    draw.profile_override = Profile::UniformSynthetic;
    draw.channel_len_override = 3;
    UplinkSignal sig = simulate_uplink(sc, ws, draw, rng);
    Eigen::Map<const Mat> R_tail(sig.r.data() + sc.fp.L_cp, 128, 32);
    Eigen::Map<const Vec> y(R_tail.data(), sc.fp.mn());
    auto obs = extract_pilot_region(y, 2, ws.layout, 0, sc.fp);
    auto basis = cpf_basis(sc.fp.n_samples(), obs.kappa, 1);
    Mat G = build_regressor(obs, basis);

    const int L = obs.L_pilot;
    for (size_t r = 0; r < obs.kappa.size(); ++r) {
        int n = obs.slot[r], i = obs.offset[r];
        for (int l = 0; l < L; ++l) {
            // circular shift within the slot window
            long t0 = static_cast<long>(sc.fp.L_cp) + static_cast<long>(n) * 128 +
                      ws.layout.l_anchor[0];
            Complex circ = obs.pilot_cp[t0 + ((i - l) % L + L) % L];
            CHECK(std::abs(G(r, l) - circ) < 1e-12);
        }
    }
}

TEST_CASE("wrong timing hypothesis lowers the CFO cost") {
    Setup s = make_setup(0.0, 1, 0.0, 4, 55);
    CfoChannelEstimator good(s.obs, s.basis);

    Eigen::Map<const Mat> R_tail(s.sig.r.data() + s.sc.fp.L_cp, 128, 32);
    Eigen::Map<const Vec> y(R_tail.data(), s.sc.fp.mn());
    auto obs_bad = extract_pilot_region(y, 5, s.ws.layout, 0, s.sc.fp);
    auto basis_bad = cpf_basis(s.sc.fp.n_samples(), obs_bad.kappa, 1);
    CfoChannelEstimator bad(obs_bad, basis_bad);
    CHECK(bad.cost(0.0) < good.cost(0.0));
}

TEST_CASE("ml cfo estimation is exact in the noiseless model class") {
    CfoSearchConfig search{-0.6, 0.6, 0.05, 1e-4};

    Setup zero = make_setup(0.0, 1, 0.0, 1, 56);
    CHECK(std::abs(ml_cfo_estimate(zero.obs, zero.basis, search).eps_hat) < 1e-4);

    Setup s3 = make_setup(0.0, 1, 0.3, 3, 57);
    CfoEstimate est = ml_cfo_estimate(s3.obs, s3.basis, search);
    CHECK(std::abs(est.eps_hat - 0.3) <= 1e-3);

    // the grid cost peaks at the true offset
    int best = 0;
    for (int i = 1; i < est.cost.size(); ++i)
        if (est.cost[i] > est.cost[best]) best = i;
    CHECK(std::abs(est.grid[best] - 0.3) <= search.step / 2 + 1e-12);
}

TEST_CASE("cost invariances: global phase and quadratic scaling") {
    Setup s = make_setup(0.0, 1, 0.2, 2, 58);
    CfoChannelEstimator est(s.obs, s.basis);
    double c = est.cost(0.17);

    PilotRegionObservation rot = s.obs;
    rot.r_bar *= std::exp(Complex(0, 0.9));
    CfoChannelEstimator est_rot(rot, s.basis);
    CHECK(est_rot.cost(0.17) == doctest::Approx(c).epsilon(1e-12));

    PilotRegionObservation scl = s.obs;
    scl.r_bar *= 3.0;
    CfoChannelEstimator est_scl(scl, s.basis);
    CHECK(est_scl.cost(0.17) == doctest::Approx(9.0 * c).epsilon(1e-12));
}

TEST_CASE("channel estimation recovers coefficients inside the model class") {
    // synthesize a ground truth strictly inside the basis span (beta' <= beta)
    Setup s = make_setup(0.0, 3, 0.0, 0, 59, 2);
    Mat G = build_regressor(s.obs, s.basis);
    Rng rng(60);
    Vec c_true = Vec::Zero(G.cols());
    for (int l = 0; l < 2; ++l)          // two taps
        for (int g = 0; g < 2; ++g)      // beta' = 2 < beta = 3
            c_true[l * 3 + g] = rng.cgaussian();
    PilotRegionObservation synth = s.obs;
    synth.r_bar = G * c_true;

    CfoChannelEstimator est(synth, s.basis);
    ChannelEstimate ce = est.estimate_channel(0.0);
    CHECK((ce.coeffs - c_true).cwiseAbs().maxCoeff() < 1e-8);

    // static channel with beta = 1 reduces to the single-coefficient LS fit
    Setup st = make_setup(0.0, 1, 0.0, 1, 61, 1);
    CfoChannelEstimator est1(st.obs, st.basis);
    ChannelEstimate ce1 = est1.estimate_channel(0.0);
    Mat G1 = build_regressor(st.obs, st.basis);
    Vec ls = least_squares_pinv(G1) * st.obs.r_bar;
    CHECK((ce1.coeffs - ls).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("nmse worked examples") {
    Mat t(2, 3);
    t.setRandom();
    CHECK(nmse(t, t) == 0.0);
    CHECK(nmse(Mat::Zero(2, 3), t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nmse(Mat(1.1 * t), t) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK_THROWS_AS(nmse(t, Mat::Zero(2, 3)), NumericalError);
}

TEST_CASE("absorbed baseline coincides with the compensated path at eps = 0") {
    Setup s = make_setup(1.0, 4, 0.0, 2, 62, 3);
    CfoChannelEstimator est(s.obs, s.basis);
    ChannelEstimate ml = est.estimate_channel(0.0);
    ChannelEstimate ab = absorbed_cfo_baseline(s.obs, s.basis);
    CHECK((ml.h - ab.h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("absorbing a large CFO degrades the channel estimate") {
    // noiseless, eps = 0.4: the absorbed fit must be strictly worse than the
    // compensated fit of the compound channel
    Setup s = make_setup(2.91, 12, 0.4, 2, 63, 0);
    CfoChannelEstimator est(s.obs, s.basis);
    CfoSearchConfig search{-0.6, 0.6, 0.05, 1e-4};
    double eps_hat = est.estimate_cfo(search).eps_hat;

    ChannelEstimate comp = est.estimate_channel(eps_hat);
    Mat target_comp = true_channel_on_region(s.sig.truth.channels[0], s.obs, 0.4 - eps_hat);
    double nm_comp = nmse(comp.h, target_comp);

    ChannelEstimate ab = absorbed_cfo_baseline(s.obs, s.basis);
    Mat target_ab = true_channel_on_region(s.sig.truth.channels[0], s.obs, 0.4);
    double nm_ab = nmse(ab.h, target_ab);
    CHECK(nm_ab > nm_comp);
}

TEST_CASE("compensated channel NMSE improves with SNR on average") {
    LinkScenario sc = base_scenario(1.0, 4, false);
    LinkWorkspace ws = make_workspace(sc);
    ReceiverOptions opt;
    opt.run_cfo = true;
    opt.perfect_to = true;
    opt.search = {-0.6, 0.6, 0.05, 1e-4};

    double lo = 0, hi = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        for (double snr : {5.0, 25.0}) {
            LinkScenario s2 = sc;
            s2.snr_db = snr;
            Rng rng(Rng::derive(64, 0, t));
            UplinkSignal sig = simulate_uplink(s2, ws, TrialDrawConfig{}, rng);
            auto res = run_receiver(sig.r, s2, ws, sig.truth, opt);
            (snr < 10 ? lo : hi) += res[0].nmse_ml / trials;
        }
    }
    CHECK(hi < lo);
}
