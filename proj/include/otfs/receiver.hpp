#pragma once

#include <optional>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/pilots.hpp"
#include "otfs/sync_freq.hpp"
#include "otfs/sync_time.hpp"

namespace otfs {

// One operating point of the uplink link-level simulation.
struct LinkScenario {
    FrameParams fp;
    Scheme scheme = Scheme::GbbmaDelay;
    PilotStructure structure = PilotStructure::MuPcp;
    GuardPolicy guard = GuardPolicy::Full;
    Profile profile = Profile::Eva;
    double kappa_max = 0.0;
    int L_ch = 10;
    int beta = 0;  // 0 = auto: max(1, ceil(2 kappa_max + 1))
    double pilot_power_db = 40.0;
    double alpha = 0.5;
    int mu_pcp_anchor = -1;  // -1 = M-1
    int qam_order = 16;
    double snr_db = 20.0;  // +inf = noiseless

    // The 2*kappa+1 rule is the identifiability floor; resolving tones near
    // kappa_max with a Chebyshev basis over the whole frame needs about
    // 4*kappa functions (12 at kappa_max = 2.91, the top of the operating
    // range), and larger beta flattens the CFO cost into ambiguity.
    int effective_beta() const {
        if (beta > 0) return beta;
        int floor_rule = static_cast<int>(std::ceil(2.0 * kappa_max + 1.0));
        int cheb_rule = static_cast<int>(std::ceil(4.0 * kappa_max));
        return std::max({1, floor_rule, cheb_rule});
    }
    // SU-PCP uses L_p = L_ch; MU-PCP uses L_ch + ceil(beta/2).
    int pilot_len() const {
        if (structure == PilotStructure::SuPcp) return L_ch;
        return L_ch + (effective_beta() + 1) / 2;
    }
    double sigma_p2() const { return std::pow(10.0, pilot_power_db / 10.0); }
    double noise_var() const {
        return std::isinf(snr_db) ? 0.0 : std::pow(10.0, -snr_db / 10.0);
    }
};

// Precomputed per-scenario state shared by all trials (read-only).
struct LinkWorkspace {
    PilotLayout layout;
    std::vector<Mat> pilot_matrices;          // Z^q per user
    std::vector<AllocationPair> allocations;  // data allocation per user
    std::vector<std::vector<int>> data_cells; // linear grid cells (k*M + l) per user
    int l_ref = 0;                            // detector reference row
};

LinkWorkspace make_workspace(const LinkScenario& sc);

struct TrialDrawConfig {
    double cfo_min = -0.5, cfo_max = 0.5;
    int to_min = 0, to_max = -1;  // -1 = theta_max
    std::optional<double> eps_force;
    std::optional<int> theta_force;
    // realized channel may differ from the design values (e.g. a single-tap
    // draw inside a frame dimensioned for L_ch = 10)
    std::optional<Profile> profile_override;
    std::optional<int> channel_len_override;
};

struct UplinkTruth {
    std::vector<LtvChannel> channels;
    std::vector<int> theta;
    std::vector<double> eps;
};

struct UplinkSignal {
    Vec r;  // N_s received samples
    UplinkTruth truth;
};

UplinkSignal simulate_uplink(const LinkScenario& sc, const LinkWorkspace& ws,
                             const TrialDrawConfig& draw, Rng& rng);

struct ReceiverOptions {
    std::vector<double> thresholds;  // metric fractions in (0,1) for first-peak
    bool run_highest = true;
    bool run_cfo = true;
    bool run_absorbed = false;
    bool perfect_to = false;  // feed the true theta to the CFO/channel stage
    bool cfo_use_highest = false;  // feed the highest-peak estimate instead
    int cfo_threshold_index = 0;  // which first-peak estimate feeds that stage
    CfoSearchConfig search;
};

struct UserSyncResult {
    std::vector<int> theta_first;  // one per threshold
    int theta_highest = -1;
    int theta_used = 0;        // what the CFO stage used
    double eps_hat = 0.0;
    // NMSE of the compound reconstruction each path hands to the equalizer:
    // exp(j eps_hat ramp) h_hat vs exp(j eps ramp) h. The two paths coincide
    // at eps = 0.
    double nmse_ml = 0.0;
    double nmse_absorbed = 0.0;
    bool cfo_ran = false;
    bool absorbed_ran = false;
};

std::vector<UserSyncResult> run_receiver(const Vec& r, const LinkScenario& sc,
                                         const LinkWorkspace& ws,
                                         const UplinkTruth& truth,
                                         const ReceiverOptions& opt);

// Signed circular difference a-b wrapped to (-M/2, M/2].
int circular_error(int a, int b, int M);

}  // namespace otfs
