#pragma once

#include "otfs/numerics.hpp"
#include "otfs/types.hpp"

namespace otfs {

struct TimingMetric {
    RealVec values;  // one entry per candidate delay slide, 1/(MN)-scaled
    int user = 0;
};

struct ThresholdRange {
    double lower = 0;
    double upper = 0;
    bool normalized = false;
    bool feasible() const { return lower < upper; }
};

struct ThresholdBounds {
    ThresholdRange absolute;    // metric units
    ThresholdRange normalized;  // relative to the (2L-1) sigma_p^2 / M peak
};

// Brickwall Doppler window taps for user q: e^q = F_N^H a^q with a^q the
// width-floor(N/Q) window shifted by q floor(N/Q).
Vec filter_taps(int N, int Q, int q);

// Separates user q's signal by windowing in the Doppler domain: DFT along
// each delay row, brickwall mask, inverse DFT. Scaled so the bank is a
// partition of unity (sum over q reproduces the input; Q=1 is the identity).
Mat filter_bank_separate(const Mat& R, int q, int Q);

// p[l'] = (1/MN) sum_n | sum_l R[l,n] conj(Z[(l-l') mod M, n]) |.
TimingMetric timing_metric(const Mat& R, const Mat& Z);

// Threshold selection bounds. The absolute range keeps the noise terms:
//   lower = (sigma_p/M) ((L+1)/2 sigma_p + sqrt(3(L-1)/2) sigma_s + sqrt(2L-1) sigma_z)
//   upper = (sigma_p/M) ((L-1)  sigma_p - sqrt(L)        sigma_s - sqrt(2L-1) sigma_z)
// The normalized range drops the noise terms and divides by (2L-1) sigma_p^2 / M.
ThresholdBounds threshold_range(int L_pilot, double sigma_s, double sigma_p,
                                double sigma_zeta, int M);

// First peak of the threshold group: theta = (min{l': p >= T max p} - L_cp -
// l_ref + 1) mod M. T is a fraction of the metric maximum, 0 < T < 1.
int detect_first_major_peak(const TimingMetric& metric, double T, int l_ref,
                            int L_cp, int M);

// theta = (argmax p - L_cp - l_ref - L_pilot - lambda_ch + 1) mod M; argmax
// ties resolve to the smallest index.
int detect_highest_peak(const TimingMetric& metric, int lambda_ch, int l_ref,
                        int L_cp, int L_pilot, int M);

// Reference row passed to the detectors by the receiver: with R[l,n] = r[nM+l]
// the first major peak sits at slide (L_cp + theta - L_pilot) mod M, so
// l_ref = (1 - L_pilot) mod M makes noiseless single-tap recovery exact.
inline int pilot_reference_row(int L_pilot, int M) { return mod(1 - L_pilot, M); }

}  // namespace otfs
