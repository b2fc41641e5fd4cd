#include "otfs/sync_time.hpp"

#include <cmath>

namespace otfs {

Vec filter_taps(int N, int Q, int q) {
    if (N < 1 || Q < 1 || q < 0 || q >= Q) throw ConfigError("filter_taps: bad indices");
    if (N % Q != 0) throw ConfigError("filter_taps: Q must divide N");
    const int w = N / Q;
    Vec a = Vec::Zero(N);
    for (int k = 0; k < w; ++k) a[q * w + k] = 1.0;
    return unitary_dft(a, true);
}

Mat filter_bank_separate(const Mat& R, int q, int Q) {
    const int N = static_cast<int>(R.cols());
    if (Q == 1) return R;
    if (N % Q != 0) throw ConfigError("filter_bank_separate: Q must divide N");
    const int w = N / Q;
    const Mat& F = dft_matrix(N);
    Mat hat = R * F;  // DFT along each delay row (F symmetric)
    Mat masked = Mat::Zero(R.rows(), N);
    masked.middleCols(q * w, w) = hat.middleCols(q * w, w);
    return masked * F.adjoint();
}

TimingMetric timing_metric(const Mat& R, const Mat& Z) {
    const int M = static_cast<int>(R.rows());
    const int N = static_cast<int>(R.cols());
    if (Z.rows() != M || Z.cols() != N)
        throw ConfigError("timing_metric: shape mismatch");

    // only the pilot's nonzero rows contribute
    std::vector<int> zrows;
    Mat Zc = Z.conjugate();
    for (int l = 0; l < M; ++l)
        if (Z.row(l).squaredNorm() > 0) zrows.push_back(l);

    TimingMetric m;
    m.values.resize(M);
    Eigen::RowVectorXcd acc(N);
    for (int lp = 0; lp < M; ++lp) {
        acc.setZero();
        for (int zr : zrows)
            acc += R.row(mod(zr + lp, M)).cwiseProduct(Zc.row(zr));
        m.values[lp] = acc.cwiseAbs().sum() / (static_cast<double>(M) * N);
    }
    return m;
}

ThresholdBounds threshold_range(int L, double sigma_s, double sigma_p,
                                double sigma_zeta, int M) {
    if (L < 2 || sigma_p <= 0 || sigma_s < 0 || sigma_zeta < 0 || M < 1)
        throw ConfigError("threshold_range: invalid inputs");
    ThresholdBounds b;
    const double sp = sigma_p / M;
    b.absolute.lower = sp * (0.5 * (L + 1) * sigma_p +
                             std::sqrt(1.5 * (L - 1)) * sigma_s +
                             std::sqrt(2.0 * L - 1.0) * sigma_zeta);
    b.absolute.upper = sp * ((L - 1) * sigma_p - std::sqrt(static_cast<double>(L)) * sigma_s -
                             std::sqrt(2.0 * L - 1.0) * sigma_zeta);
    b.absolute.normalized = false;

    const double r = sigma_s / sigma_p;
    b.normalized.lower = (L + 1 + std::sqrt(6.0 * (L - 1)) * r) / (2.0 * (2.0 * L - 1.0));
    b.normalized.upper = (L - 1 + std::sqrt(static_cast<double>(L)) * r) / (2.0 * L - 1.0);
    b.normalized.normalized = true;
    return b;
}

int detect_first_major_peak(const TimingMetric& metric, double T, int l_ref,
                            int L_cp, int M) {
    if (!(T > 0.0 && T < 1.0)) throw ConfigError("detect_first_major_peak: need 0 < T < 1");
    if (metric.values.size() != M) throw ConfigError("detect_first_major_peak: metric size");
    double peak = metric.values.maxCoeff();
    double thr = T * peak;
    int first = -1;
    for (int lp = 0; lp < M; ++lp) {
        if (metric.values[lp] >= thr) {
            first = lp;
            break;
        }
    }
    return mod(first - L_cp - l_ref + 1, M);
}

int detect_highest_peak(const TimingMetric& metric, int lambda_ch, int l_ref,
                        int L_cp, int L_pilot, int M) {
    if (metric.values.size() != M) throw ConfigError("detect_highest_peak: metric size");
    int best = 0;
    for (int lp = 1; lp < M; ++lp)
        if (metric.values[lp] > metric.values[best]) best = lp;  // ties keep the smaller index
    return mod(best - L_cp - l_ref - L_pilot - lambda_ch + 1, M);
}

}  // namespace otfs
