#include "otfs/channel.hpp"

#include <algorithm>
#include <cmath>

namespace otfs {

int LtvChannel::length() const {
    int L = 0;
    for (const auto& t : taps) L = std::max(L, t.delay + 1);
    return L;
}

double LtvChannel::total_power() const {
    double p = 0;
    for (const auto& t : taps) p += std::norm(t.gain);
    return p;
}

Complex LtvChannel::response(int l, double kappa) const {
    Complex h = 0;
    for (const auto& t : taps) {
        if (t.delay != l) continue;
        double ang = 2.0 * kPi * t.doppler * (kappa - l);
        h += t.gain * Complex(std::cos(ang), std::sin(ang));
    }
    return h;
}

std::vector<double> LtvChannel::power_delay_profile() const {
    std::vector<double> pdp(length(), 0.0);
    for (const auto& t : taps) pdp[t.delay] += std::norm(t.gain);
    return pdp;
}

const char* profile_name(Profile p) {
    switch (p) {
        case Profile::Eva: return "eva";
        case Profile::TdlC: return "tdl-c";
        case Profile::UniformSynthetic: return "uniform";
    }
    return "?";
}

Profile profile_from_name(const std::string& name) {
    if (name == "eva") return Profile::Eva;
    if (name == "tdl-c") return Profile::TdlC;
    if (name == "uniform") return Profile::UniformSynthetic;
    throw ConfigError("unknown channel profile: " + name);
}

const std::vector<ProfileTap>& eva_profile() {
    // 3GPP TS 36.101 Extended Vehicular A
    static const std::vector<ProfileTap> taps = {
        {0, 0.0},     {30, -1.5},   {150, -1.4},  {310, -3.6},  {370, -0.6},
        {710, -9.1},  {1090, -7.0}, {1730, -12.0}, {2510, -16.9},
    };
    return taps;
}

std::vector<ProfileTap> tdlc_profile(double delay_spread_ns) {
    // 3GPP TR 38.901 TDL-C, normalized delays scaled by the delay spread.
    static const double nd[] = {0,      0.2099, 0.2219, 0.2329, 0.2176, 0.6366,
                                0.6448, 0.6560, 0.6584, 0.7935, 0.8213, 0.9336,
                                1.2285, 1.3083, 2.1704, 2.7105, 4.2589, 4.6003,
                                5.4902, 5.6077, 6.3065, 6.6374, 7.0427, 8.6523};
    static const double pw[] = {-4.4,  -1.2,  -3.5,  -5.2,  -2.5,  0.0,
                                -2.2,  -3.9,  -7.4,  -7.1,  -10.7, -11.1,
                                -5.1,  -6.8,  -8.7,  -13.2, -13.9, -13.9,
                                -15.8, -17.1, -16.0, -15.7, -21.6, -22.8};
    std::vector<ProfileTap> taps;
    for (size_t i = 0; i < sizeof(nd) / sizeof(nd[0]); ++i)
        taps.push_back({nd[i] * delay_spread_ns, pw[i]});
    return taps;
}

LtvChannel generate_channel(Profile profile, double kappa_max, int L_ch,
                            const FrameParams& params, Rng& rng) {
    if (kappa_max < 0) throw ConfigError("generate_channel: kappa_max must be >= 0");
    if (L_ch < 1) throw ConfigError("generate_channel: L_ch must be >= 1");

    struct PathSpec { int bin; double power; };
    std::vector<PathSpec> spec;

    if (profile == Profile::UniformSynthetic) {
        for (int l = 0; l < L_ch; ++l) spec.push_back({l, 1.0 / L_ch});
    } else {
        const auto& table = profile == Profile::Eva ? eva_profile() : tdlc_profile();
        double total = 0;
        for (const auto& t : table) total += std::pow(10.0, t.power_db / 10.0);
        for (const auto& t : table) {
            int bin = static_cast<int>(std::floor(t.delay_ns * 1e-9 / params.delta_tau));
            if (bin >= L_ch)
                throw ConfigError("generate_channel: profile tap beyond L_ch after quantization");
            spec.push_back({bin, std::pow(10.0, t.power_db / 10.0) / total});
        }
    }

    const double nu_max = kappa_max / params.mn();  // cycles per sample
    LtvChannel ch;
    for (const auto& p : spec) {
        ChannelTap tap;
        tap.delay = p.bin;
        tap.gain = std::sqrt(p.power) * rng.cgaussian();
        double psi = rng.uniform(0.0, 2.0 * kPi);
        tap.doppler = nu_max * std::cos(psi);
        ch.taps.push_back(tap);
    }
    double power = ch.total_power();
    if (power <= 0) throw NumericalError("generate_channel: zero-power draw");
    double g = 1.0 / std::sqrt(power);
    for (auto& t : ch.taps) t.gain *= g;
    return ch;
}

Vec apply_channel(const Vec& s, const LtvChannel& ch, const ImpairmentSet& imp,
                  const FrameParams& params, Rng& rng) {
    imp.validate(params);
    const int Ns = params.n_samples();
    if (s.size() != Ns) throw ConfigError("apply_channel: signal length != N_s");
    int max_delay = ch.length() - 1;
    if (imp.theta + max_delay > params.L_cp)
        throw ConfigError("apply_channel: theta + max channel delay exceeds the CP budget");

    Vec r = Vec::Zero(Ns);
    for (const auto& tap : ch.taps) {
        int shift = tap.delay + imp.theta;
        for (int kappa = shift; kappa < Ns; ++kappa) {
            double ang = 2.0 * kPi * tap.doppler * (kappa - tap.delay);
            r[kappa] += tap.gain * Complex(std::cos(ang), std::sin(ang)) * s[kappa - shift];
        }
    }
    if (imp.eps != 0.0) {
        for (int kappa = 0; kappa < Ns; ++kappa) {
            double ang = 2.0 * kPi * imp.eps * kappa / Ns;
            r[kappa] *= Complex(std::cos(ang), std::sin(ang));
        }
    }
    if (imp.noise_var > 0.0) {
        double sd = std::sqrt(imp.noise_var);
        for (int kappa = 0; kappa < Ns; ++kappa) r[kappa] += sd * rng.cgaussian();
    }
    return r;
}

Vec add_awgn(const Vec& x, double sigma2, Rng& rng) {
    if (sigma2 < 0) throw ConfigError("add_awgn: negative variance");
    if (sigma2 == 0.0) return x;
    Vec y = x;
    double sd = std::sqrt(sigma2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sd * rng.cgaussian();
    return y;
}

int mean_delay(const LtvChannel& ch) {
    if (ch.taps.empty()) throw ConfigError("mean_delay: empty channel");
    double num = 0, den = 0;
    for (const auto& t : ch.taps) {
        num += t.delay * std::norm(t.gain);
        den += std::norm(t.gain);
    }
    return static_cast<int>(std::floor(num / den));
}

Mat compound_channel_matrix(const std::vector<LtvChannel>& channels,
                            const std::vector<ImpairmentSet>& imps,
                            const std::vector<AllocationPair>& allocs,
                            const FrameParams& params) {
    const int Q = static_cast<int>(channels.size());
    if (static_cast<int>(imps.size()) != Q || static_cast<int>(allocs.size()) != Q)
        throw ConfigError("compound_channel_matrix: per-user lists disagree");
    const int M = params.M, N = params.N, MN = params.mn(), Ns = params.n_samples();

    // A_cp: prepend last L_cp samples
    Mat Acp = Mat::Zero(Ns, MN);
    for (int i = 0; i < params.L_cp; ++i) Acp(i, MN - params.L_cp + i) = 1.0;
    for (int i = 0; i < MN; ++i) Acp(params.L_cp + i, i) = 1.0;

    // CP removal composed with the theta_max stacking: keep rows L_cp..Ns-1
    Mat Rall = Mat::Zero(MN, Ns);
    for (int i = 0; i < MN; ++i) Rall(i, params.L_cp + i) = 1.0;

    // F_N (x) I_M
    const Mat& F = dft_matrix(N);
    Mat FkI = Mat::Zero(MN, MN);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int m = 0; m < M; ++m) FkI(a * M + m, b * M + m) = F(a, b);

    Mat psi = Mat::Zero(MN, MN);
    for (int q = 0; q < Q; ++q) {
        imps[q].validate(params);
        // Pi(theta): row kappa selects sample kappa - theta
        Mat Pi = Mat::Zero(Ns, Ns);
        for (int k = imps[q].theta; k < Ns; ++k) Pi(k, k - imps[q].theta) = 1.0;
        // Time-varying convolution evaluated at receive time (applied after Pi)
        Mat H = Mat::Zero(Ns, Ns);
        for (const auto& tap : channels[q].taps) {
            for (int k = tap.delay; k < Ns; ++k) {
                double ang = 2.0 * kPi * tap.doppler * (k - tap.delay);
                H(k, k - tap.delay) += tap.gain * Complex(std::cos(ang), std::sin(ang));
            }
        }
        Mat Phi = Mat::Zero(Ns, Ns);
        for (int k = 0; k < Ns; ++k) {
            double ang = 2.0 * kPi * imps[q].eps * k / Ns;
            Phi(k, k) = Complex(std::cos(ang), std::sin(ang));
        }
        // Grid mask P^q = Gamma^q (Gamma^q)^H on the vectorized grid
        Mat P = Mat::Zero(MN, MN);
        for (int l : allocs[q].delay_bins)
            for (int k : allocs[q].doppler_bins) P(k * M + l, k * M + l) = 1.0;

        psi += FkI * Rall * Phi * H * Pi * Acp * FkI.adjoint() * P;
    }
    return psi;
}

}  // namespace otfs
