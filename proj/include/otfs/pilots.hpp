#pragma once

#include <vector>

#include "otfs/frame.hpp"
#include "otfs/numerics.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class PilotStructure { SuPcp, MuPcp };
enum class GuardPolicy { Full, Partial };

const char* pilot_structure_name(PilotStructure s);
PilotStructure pilot_structure_from_name(const std::string& name);

// PCP: the last L-1 samples of a base sequence prepended as a CP, giving a
// length 2L-1 vector with two identical halves.
struct PcpVector {
    Vec samples;       // length 2L-1
    int base_len = 0;  // L
};

PcpVector build_pcp(const ZcSequence& zc);

struct PilotLayout {
    PilotStructure structure = PilotStructure::MuPcp;
    GuardPolicy guard = GuardPolicy::Full;
    int M = 0, N = 0, Q = 1;
    int pilot_len = 0;           // L_p (SU) or L_p-check (MU); PCP spans 2*pilot_len-1 rows
    int zc_root = 1;             // base root mu
    double sigma_p2 = 1.0;       // delay-time pilot power per sample
    int guard_halfwidth = 0;     // Doppler guard bins per side (partial policy)
    std::vector<int> l_anchor;   // l_p^q per user (MU: all equal)
    std::vector<int> k_pilot;    // k_p^q per user
    std::vector<int> zc_factor;  // odd sequence factor per user (MU: all 1)

    double dd_amplitude() const { return std::sqrt(N * sigma_p2); }
    // PCP rows for user q, in span order, each reduced mod M.
    std::vector<int> delay_rows(int q) const;
    // true when cell (l, k) is reserved for pilots or guards (no data allowed)
    bool is_reserved(int l, int k) const;
    PcpVector pcp(int q) const;
    void validate() const;
};

// SU-PCP (per-user disjoint delay blocks, common Doppler bin N/2):
//   l_p = M/2 + floor(Q/2) - Q L_p,  l_p^q = l_p + L_p + q(2L_p - 1).
// Requires even M and N; capacity Q <= min(L_p-1, floor(M/(2L_p-1))).
PilotLayout layout_su_pcp(const FrameParams& params, int L_p, GuardPolicy guard,
                          double kappa_max, double sigma_p2);

// MU-PCP (shared delay block, per-user Doppler bins):
//   k_p^q = floor(N/Q)/2 + q floor(N/Q), shared anchor l_p (default M-1).
// Capacity Q <= floor(N / (4 alpha kappa_max + 1)).
PilotLayout layout_mu_pcp(const FrameParams& params, int L_check_p, double alpha,
                          double kappa_max, double sigma_p2, int l_p = -1);

// Writes user q's PCP into its pilot cells; all reserved cells of the input
// must be zero (throws on overlap with data).
Mat embed_pilots(const Mat& data_grid, const PilotLayout& layout, int q);

// Transmitted delay-time pilot matrix Z^q (M x N): the PCP column at the
// user's Doppler bin transformed along Doppler by F_N^H, rows placed mod M.
Mat transmit_pilot_matrix(const PilotLayout& layout, int q);

int max_users(PilotStructure structure, const FrameParams& params, int pilot_len,
              double kappa_max, double alpha);

}  // namespace otfs
