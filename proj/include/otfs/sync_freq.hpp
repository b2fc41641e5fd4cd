#pragma once

#include <vector>

#include "otfs/channel.hpp"
#include "otfs/pilots.hpp"
#include "otfs/types.hpp"

namespace otfs {

// Chebyshev (first kind) basis over normalized time kappa' = (2k-Ns+1)/(Ns-1),
// built by the recursion B[.,g+1] = 2 kappa' B[.,g] - B[.,g-1].
struct BemBasis {
    int beta = 0;
    std::vector<long> kappa;  // absolute sample index per row
    RealMat B;                // rows x beta
};

BemBasis cpf_basis(long N_s, const std::vector<long>& kappa, int beta);

// Received pilot region of one user: per time slot the L_pilot samples
// starting at delay row l_p^q + theta_hat, stacked slot-major. Rows whose
// absolute sample index would fall outside the frame are dropped (wrapping
// layouts such as l_p = M-1 lose part of the last slot).
struct PilotRegionObservation {
    Vec r_bar;                  // observed samples, one per kept row
    std::vector<long> kappa;    // absolute receive-sample index per row
    std::vector<int> slot;      // time slot n per row
    std::vector<int> offset;    // i in [0, L_pilot) per row
    Vec pilot_cp;               // transmitted pilot signal with CP (length N_s)
    int theta_hat = 0;
    int L_pilot = 0;
    int N = 0;
    long N_s = 0;

    long transmit_index(size_t row) const { return kappa[row] - theta_hat; }
};

// y is the CP-removed window (MN samples, y[m] = r[L_cp + m]), possibly after
// the user's bandpass filter.
PilotRegionObservation extract_pilot_region(const Vec& y, int theta_hat,
                                            const PilotLayout& layout, int q,
                                            const FrameParams& params);

// G[row, l*beta+g] = pilot_cp[t(row) - l] * B[row, g]: the per-slot
// shifted-pilot diagonals combined with the basis, stacked over slots.
Mat build_regressor(const PilotRegionObservation& obs, const BemBasis& basis);

struct CfoSearchConfig {
    double min_eps = 0.0;   // filled from N/2 defaults when left 0
    double max_eps = 0.0;
    double step = 0.05;
    double refine_tol = 1e-4;

    static CfoSearchConfig defaults_for(int N) {
        CfoSearchConfig c;
        c.min_eps = -N / 2.0;
        c.max_eps = N / 2.0;
        return c;
    }
};

struct CfoEstimate {
    double eps_hat = 0.0;
    RealVec grid;  // searched grid points
    RealVec cost;  // g_CFO at each grid point
};

struct ChannelEstimate {
    Vec coeffs;  // c: beta coefficients per tap, tap-major
    Mat h;       // reconstructed h[l, row], L_pilot x region rows
};

// Factors G once and serves both the CFO line search and the channel solve.
class CfoChannelEstimator {
public:
    CfoChannelEstimator(const PilotRegionObservation& obs, const BemBasis& basis);

    double cost(double eps_tilde) const;                 // g_CFO
    CfoEstimate estimate_cfo(const CfoSearchConfig& search) const;
    ChannelEstimate estimate_channel(double eps_hat) const;

    const Mat& regressor() const { return G_; }

private:
    Vec derotate(double eps) const;  // Phi(eps)^H r_bar
    const PilotRegionObservation& obs_;
    const BemBasis& basis_;
    Mat G_;
    Eigen::ColPivHouseholderQR<Mat> qr_;
    Mat Q1_;  // orthonormal basis of range(G)
};

// Convenience wrappers matching the per-operation contracts.
CfoEstimate ml_cfo_estimate(const PilotRegionObservation& obs, const BemBasis& basis,
                            const CfoSearchConfig& search);
ChannelEstimate estimate_channel(const PilotRegionObservation& obs,
                                 const BemBasis& basis, double eps_hat);
// Least-squares channel fit with no CFO compensation (eps forced to zero).
ChannelEstimate absorbed_cfo_baseline(const PilotRegionObservation& obs,
                                      const BemBasis& basis);

double nmse(const Mat& estimate, const Mat& truth);

// Ground-truth h[l, kappa(row)] over the observation support; eps_fold != 0
// folds the CFO ramp into the channel (the target of the absorbed baseline).
Mat true_channel_on_region(const LtvChannel& ch, const PilotRegionObservation& obs,
                           double eps_fold = 0.0);

}  // namespace otfs
