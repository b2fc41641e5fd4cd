#include "otfs/sync_freq.hpp"

#include <cmath>

namespace otfs {

BemBasis cpf_basis(long N_s, const std::vector<long>& kappa, int beta) {
    if (beta < 1) throw ConfigError("cpf_basis: beta must be >= 1");
    if (N_s < 2) throw ConfigError("cpf_basis: N_s must be >= 2");
    BemBasis basis;
    basis.beta = beta;
    basis.kappa = kappa;
    basis.B.resize(static_cast<Eigen::Index>(kappa.size()), beta);
    for (size_t r = 0; r < kappa.size(); ++r) {
        long k = kappa[r];
        if (k < 0 || k >= N_s) throw ConfigError("cpf_basis: sample index outside the frame");
        double kp = (2.0 * k - N_s + 1.0) / (N_s - 1.0);
        basis.B(r, 0) = 1.0;
        if (beta > 1) basis.B(r, 1) = kp;
        for (int g = 2; g < beta; ++g)
            basis.B(r, g) = 2.0 * kp * basis.B(r, g - 1) - basis.B(r, g - 2);
    }
    return basis;
}

PilotRegionObservation extract_pilot_region(const Vec& y, int theta_hat,
                                            const PilotLayout& layout, int q,
                                            const FrameParams& params) {
    if (theta_hat < 0 || theta_hat > params.theta_max)
        throw ConfigError("extract_pilot_region: theta_hat outside the CP budget");
    const int M = params.M, N = params.N, MN = params.mn();
    if (y.size() != MN) throw ConfigError("extract_pilot_region: window must hold MN samples");

    PilotRegionObservation obs;
    obs.theta_hat = theta_hat;
    obs.L_pilot = layout.pilot_len;
    obs.N = N;
    obs.N_s = params.n_samples();

    Mat Z = transmit_pilot_matrix(layout, q);
    Eigen::Map<const Vec> z_serial(Z.data(), MN);
    obs.pilot_cp.resize(obs.N_s);
    obs.pilot_cp.head(params.L_cp) = z_serial.tail(params.L_cp);
    obs.pilot_cp.tail(MN) = z_serial;

    const int l_start = layout.l_anchor[q] + theta_hat;
    for (int n = 0; n < N; ++n) {
        for (int i = 0; i < layout.pilot_len; ++i) {
            long idx = static_cast<long>(n) * M + l_start + i;  // position in y
            if (idx >= MN) continue;  // row would lie beyond the frame
            obs.kappa.push_back(params.L_cp + idx);
            obs.slot.push_back(n);
            obs.offset.push_back(i);
        }
    }
    if (obs.kappa.empty())
        throw ConfigError("extract_pilot_region: region entirely outside the frame");
    obs.r_bar.resize(static_cast<Eigen::Index>(obs.kappa.size()));
    for (size_t r = 0; r < obs.kappa.size(); ++r)
        obs.r_bar[static_cast<Eigen::Index>(r)] = y[obs.kappa[r] - params.L_cp];
    return obs;
}

Mat build_regressor(const PilotRegionObservation& obs, const BemBasis& basis) {
    const size_t rows = obs.kappa.size();
    if (basis.kappa != obs.kappa)
        throw ConfigError("build_regressor: basis rows do not match the observation");
    const int L = obs.L_pilot, beta = basis.beta;
    Mat G(rows, static_cast<Eigen::Index>(L) * beta);
    for (size_t r = 0; r < rows; ++r) {
        long t = obs.transmit_index(r);
        for (int l = 0; l < L; ++l) {
            Complex s = (t - l >= 0 && t - l < obs.N_s) ? obs.pilot_cp[t - l] : Complex(0, 0);
            for (int g = 0; g < beta; ++g)
                G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l) * beta + g) =
                    s * basis.B(static_cast<Eigen::Index>(r), g);
        }
    }
    return G;
}

CfoChannelEstimator::CfoChannelEstimator(const PilotRegionObservation& obs,
                                         const BemBasis& basis)
    : obs_(obs), basis_(basis), G_(build_regressor(obs, basis)), qr_(G_) {
    const int k = static_cast<int>(G_.cols());
    const auto& R = qr_.matrixR();
    double dmax = std::abs(R(0, 0));
    double dmin = std::abs(R(k - 1, k - 1));
    if (qr_.rank() < k || dmin <= 0.0)
        throw NumericalError("CfoChannelEstimator: rank-deficient regressor",
                             dmin > 0 ? dmax / dmin : std::numeric_limits<double>::infinity());
    Q1_ = qr_.householderQ() * Mat::Identity(G_.rows(), G_.cols());
}

Vec CfoChannelEstimator::derotate(double eps) const {
    Vec w(obs_.r_bar.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        double ang = -2.0 * kPi * eps * obs_.kappa[static_cast<size_t>(i)] / obs_.N_s;
        w[i] = obs_.r_bar[i] * Complex(std::cos(ang), std::sin(ang));
    }
    return w;
}

double CfoChannelEstimator::cost(double eps_tilde) const {
    return (Q1_.adjoint() * derotate(eps_tilde)).squaredNorm();
}

CfoEstimate CfoChannelEstimator::estimate_cfo(const CfoSearchConfig& search) const {
    if (obs_.r_bar.squaredNorm() <= 0)
        throw NumericalError("ml_cfo_estimate: all-zero pilot region (flat cost)");
    if (!(search.max_eps > search.min_eps) || search.step <= 0)
        throw ConfigError("ml_cfo_estimate: bad search interval");

    CfoEstimate est;
    int points = static_cast<int>(std::floor((search.max_eps - search.min_eps) / search.step)) + 1;
    est.grid.resize(points);
    est.cost.resize(points);
    int best = 0;
    for (int i = 0; i < points; ++i) {
        est.grid[i] = search.min_eps + i * search.step;
        est.cost[i] = cost(est.grid[i]);
        if (est.cost[i] > est.cost[best]) best = i;
    }

    // golden-section refinement on the local lobe around the grid maximum
    const double gr = 0.6180339887498949;
    double a = est.grid[best] - search.step;
    double b = est.grid[best] + search.step;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = cost(x1), f2 = cost(x2);
    while (b - a > search.refine_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = cost(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = cost(x1);
        }
    }
    est.eps_hat = 0.5 * (a + b);
    return est;
}

ChannelEstimate CfoChannelEstimator::estimate_channel(double eps_hat) const {
    ChannelEstimate ce;
    ce.coeffs = qr_.solve(derotate(eps_hat));
    const int L = obs_.L_pilot, beta = basis_.beta;
    const Eigen::Index rows = static_cast<Eigen::Index>(obs_.kappa.size());
    ce.h.resize(L, rows);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (int l = 0; l < L; ++l) {
            Complex acc = 0;
            for (int g = 0; g < beta; ++g)
                acc += basis_.B(r, g) * ce.coeffs[static_cast<Eigen::Index>(l) * beta + g];
            ce.h(l, r) = acc;
        }
    return ce;
}

CfoEstimate ml_cfo_estimate(const PilotRegionObservation& obs, const BemBasis& basis,
                            const CfoSearchConfig& search) {
    return CfoChannelEstimator(obs, basis).estimate_cfo(search);
}

ChannelEstimate estimate_channel(const PilotRegionObservation& obs,
                                 const BemBasis& basis, double eps_hat) {
    return CfoChannelEstimator(obs, basis).estimate_channel(eps_hat);
}

ChannelEstimate absorbed_cfo_baseline(const PilotRegionObservation& obs,
                                      const BemBasis& basis) {
    return CfoChannelEstimator(obs, basis).estimate_channel(0.0);
}

double nmse(const Mat& estimate, const Mat& truth) {
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
        throw ConfigError("nmse: shape mismatch");
    double denom = truth.squaredNorm();
    if (denom <= 0) throw NumericalError("nmse: zero-energy truth");
    return (estimate - truth).squaredNorm() / denom;
}

Mat true_channel_on_region(const LtvChannel& ch, const PilotRegionObservation& obs,
                           double eps_fold) {
    const Eigen::Index rows = static_cast<Eigen::Index>(obs.kappa.size());
    Mat h = Mat::Zero(obs.L_pilot, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        long k = obs.kappa[static_cast<size_t>(r)];
        Complex fold(1, 0);
        if (eps_fold != 0.0) {
            double ang = 2.0 * kPi * eps_fold * k / obs.N_s;
            fold = Complex(std::cos(ang), std::sin(ang));
        }
        for (int l = 0; l < obs.L_pilot; ++l)
            h(l, r) = fold * ch.response(l, static_cast<double>(k));
    }
    return h;
}

}  // namespace otfs
