#pragma once

#include <complex>
#include <stdexcept>
#include <Eigen/Dense>

namespace otfs {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown on invalid configurations (frame sizes, layouts, config files).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical operation cannot proceed (rank deficiency etc.).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double condition = 0.0)
        : std::runtime_error(what), condition_estimate(condition) {}
    double condition_estimate;
};

// Frame geometry. The delay-time grid has M delay bins per block and N blocks
// (time slots); one frame is M*N samples plus a cyclic prefix of L_cp samples.
struct FrameParams {
    int M = 0;             // delay bins
    int N = 0;             // Doppler bins / time slots
    int Q = 1;             // number of users
    double delta_tau = 1.0;  // delay spacing in seconds (= 1/bandwidth)
    int L_cp = 0;          // cyclic prefix length in samples
    int theta_max = 0;     // timing-offset budget in samples

    int mn() const { return M * N; }
    int n_samples() const { return M * N + L_cp; }          // N_s
    double block_duration() const { return M * delta_tau; } // T
    double frame_duration() const { return N * M * delta_tau; } // T_f
    double doppler_spacing() const { return 1.0 / frame_duration(); }

    void validate() const {
        if (M < 1 || N < 1 || Q < 1)
            throw ConfigError("FrameParams: M, N, Q must all be >= 1");
        if (L_cp < 0 || theta_max < 0 || theta_max > L_cp)
            throw ConfigError("FrameParams: need 0 <= theta_max <= L_cp");
        if (delta_tau <= 0.0)
            throw ConfigError("FrameParams: delta_tau must be positive");
    }
};

// CP length policy: L_cp = max channel length + theta_max - 1.
inline FrameParams make_frame_params(int M, int N, int Q, double delta_tau,
                                     int max_channel_len, int theta_max) {
    FrameParams p;
    p.M = M;
    p.N = N;
    p.Q = Q;
    p.delta_tau = delta_tau;
    p.theta_max = theta_max;
    p.L_cp = max_channel_len + theta_max - 1;
    if (p.L_cp < 0) p.L_cp = 0;
    p.validate();
    return p;
}

inline int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace otfs
