#pragma once

#include <vector>

#include "otfs/numerics.hpp"
#include "otfs/rng.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class Scheme { GenMAExplicit, GbbmaDelay, GbbmaDoppler, Itfma, Iddma };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Per-user delay/Doppler selection. gamma_tau is M x M_q (columns of I_M),
// gamma_nu is N_q x N (rows of I_N); D^q = gamma_tau * data * gamma_nu.
struct AllocationPair {
    Scheme scheme = Scheme::GenMAExplicit;
    int user = 0;
    int M = 0, N = 0;
    std::vector<int> delay_bins;    // U_tau^q, size M_q
    std::vector<int> doppler_bins;  // U_nu^q,  size N_q

    RealMat gamma_tau() const;
    RealMat gamma_nu() const;
};

// Closed-form allocations for the named schemes. For ITFMA/IDDMA the user
// index decomposes into (delay block, Doppler block) = (q mod B_tau, q / B_tau)
// where B_tau = floor(M/M_q); the per-dimension forms use floor semantics.
AllocationPair build_allocation(Scheme scheme, int q, const FrameParams& params,
                                int M_q, int N_q);

AllocationPair explicit_allocation(std::vector<int> delay_bins,
                                   std::vector<int> doppler_bins,
                                   const FrameParams& params, int q);

// D = gamma_tau * data * gamma_nu (scatter of the M_q x N_q block).
Mat map_data(const Mat& data, const AllocationPair& alloc);

struct DelayDopplerFrame {
    Mat grid;        // D, M x N
    Mat delay_time;  // X = D F_N^H
    Vec serialized;  // x = vec(X), column-major
    Vec with_cp;     // s = A_cp x
};

// X = D F_N^H; s prepends the last L_cp samples of x.
DelayDopplerFrame otfs_modulate(const Mat& D, const FrameParams& params);

// Keeps the last MN samples of the received vector and applies the N-point
// DFT along the time dimension: d_tilde = (F_N (x) I_M) R_cp r.
Vec remove_cp_and_demap(const Vec& y_full, const FrameParams& params, int theta_max);

// Gray-coded square QAM (4/16/64), unit average energy.
std::vector<Complex> qam_constellation(int order);
Vec draw_qam(int count, int order, Rng& rng);

}  // namespace otfs
