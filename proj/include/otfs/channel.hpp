#pragma once

#include <vector>

#include "otfs/frame.hpp"
#include "otfs/rng.hpp"
#include "otfs/types.hpp"

namespace otfs {

// One propagation path: complex gain, integer delay in samples, Doppler in
// cycles/sample. Several paths may share a delay bin; their time-varying sum
// is the per-bin response of Eq-style h[l, kappa].
struct ChannelTap {
    Complex gain;
    int delay = 0;
    double doppler = 0.0;  // cycles per sample
};

struct LtvChannel {
    std::vector<ChannelTap> taps;
    int user = 0;

    int length() const;                       // max delay + 1
    double total_power() const;               // sum |gain|^2
    Complex response(int l, double kappa) const;  // h[l, kappa]
    std::vector<double> power_delay_profile() const;  // per-bin |gain|^2 sums
};

enum class Profile { Eva, TdlC, UniformSynthetic };

const char* profile_name(Profile p);
Profile profile_from_name(const std::string& name);

// Draws a channel realization. Tap delays/powers follow the profile quantized
// to the delay spacing (floor, same-bin paths kept as distinct taps); per-path
// Doppler is kappa_max*cos(psi)/(MN) with psi uniform; gains are complex
// Gaussian with the profile power and then normalized to unit total power.
// kappa_max is the maximum Doppler shift normalized to the Doppler spacing.
LtvChannel generate_channel(Profile profile, double kappa_max, int L_ch,
                            const FrameParams& params, Rng& rng);

struct ImpairmentSet {
    int theta = 0;          // timing offset, samples
    double eps = 0.0;       // CFO normalized to Doppler spacing
    double noise_var = 0.0; // sigma_eta^2

    void validate(const FrameParams& p) const {
        if (theta < 0 || theta > p.theta_max)
            throw ConfigError("ImpairmentSet: theta outside [0, theta_max]");
        if (!std::isfinite(eps)) throw ConfigError("ImpairmentSet: eps not finite");
        if (noise_var < 0) throw ConfigError("ImpairmentSet: negative noise variance");
    }
};

// r[kappa] = e^{j 2 pi eps kappa / N_s} sum_l s[kappa-l-theta] h[l,kappa] + eta.
// Out-of-range s indices read as zero. Noise is added only when
// imp.noise_var > 0 (multiuser reception sums per-user outputs first and adds
// one noise term at the sum).
Vec apply_channel(const Vec& s, const LtvChannel& ch, const ImpairmentSet& imp,
                  const FrameParams& params, Rng& rng);

Vec add_awgn(const Vec& x, double sigma2, Rng& rng);

// floor( sum l |h|^2 / sum |h|^2 )
int mean_delay(const LtvChannel& ch);

// Compound delay-Doppler channel matrix (MN x MN): Psi_DD such that
// Psi_DD * d equals remove_cp_and_demap(sum_q apply_channel(...)) for
// noiseless transmission of the combined grid vector d. Built from the
// explicit CFO ramp, delay shift, time-varying convolution, A_cp, CP removal
// and (F_N (x) I_M) factors.
Mat compound_channel_matrix(const std::vector<LtvChannel>& channels,
                            const std::vector<ImpairmentSet>& imps,
                            const std::vector<AllocationPair>& allocs,
                            const FrameParams& params);

// EVA / TDL-C profile tables (delay ns, power dB); exposed for tests.
struct ProfileTap { double delay_ns; double power_db; };
const std::vector<ProfileTap>& eva_profile();
std::vector<ProfileTap> tdlc_profile(double delay_spread_ns = 300.0);

}  // namespace otfs
