#include "otfs/frame.hpp"

#include <algorithm>
#include <string>

namespace otfs {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::GenMAExplicit: return "genma";
        case Scheme::GbbmaDelay: return "gbbma-delay";
        case Scheme::GbbmaDoppler: return "gbbma-doppler";
        case Scheme::Itfma: return "itfma";
        case Scheme::Iddma: return "iddma";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "genma") return Scheme::GenMAExplicit;
    if (name == "gbbma-delay") return Scheme::GbbmaDelay;
    if (name == "gbbma-doppler") return Scheme::GbbmaDoppler;
    if (name == "itfma") return Scheme::Itfma;
    if (name == "iddma") return Scheme::Iddma;
    throw ConfigError("unknown allocation scheme: " + name);
}

RealMat AllocationPair::gamma_tau() const {
    RealMat G = RealMat::Zero(M, static_cast<int>(delay_bins.size()));
    for (size_t c = 0; c < delay_bins.size(); ++c) G(delay_bins[c], static_cast<int>(c)) = 1.0;
    return G;
}

RealMat AllocationPair::gamma_nu() const {
    RealMat G = RealMat::Zero(static_cast<int>(doppler_bins.size()), N);
    for (size_t r = 0; r < doppler_bins.size(); ++r) G(static_cast<int>(r), doppler_bins[r]) = 1.0;
    return G;
}

namespace {

void check_bins(const std::vector<int>& bins, int limit, const char* what) {
    std::vector<char> seen(limit, 0);
    for (int b : bins) {
        if (b < 0 || b >= limit) throw ConfigError(std::string(what) + ": index out of range");
        if (seen[b]) throw ConfigError(std::string(what) + ": duplicate index");
        seen[b] = 1;
    }
}

// Comb of M_q bins: {q, s+q, 2s+q, ...} with stride s = floor(M/M_q).
std::vector<int> comb_bins(int total, int count, int offset) {
    int stride = total / count;
    std::vector<int> bins(count);
    for (int i = 0; i < count; ++i) bins[i] = i * stride + offset;
    return bins;
}

std::vector<int> block_bins(int count, int block) {
    std::vector<int> bins(count);
    for (int i = 0; i < count; ++i) bins[i] = block * count + i;
    return bins;
}

std::vector<int> all_bins(int total) {
    std::vector<int> bins(total);
    for (int i = 0; i < total; ++i) bins[i] = i;
    return bins;
}

}  // namespace

AllocationPair explicit_allocation(std::vector<int> delay_bins,
                                   std::vector<int> doppler_bins,
                                   const FrameParams& params, int q) {
    check_bins(delay_bins, params.M, "delay bins");
    check_bins(doppler_bins, params.N, "doppler bins");
    AllocationPair a;
    a.scheme = Scheme::GenMAExplicit;
    a.user = q;
    a.M = params.M;
    a.N = params.N;
    a.delay_bins = std::move(delay_bins);
    a.doppler_bins = std::move(doppler_bins);
    return a;
}

AllocationPair build_allocation(Scheme scheme, int q, const FrameParams& params,
                                int M_q, int N_q) {
    const int M = params.M, N = params.N, Q = params.Q;
    if (q < 0 || q >= Q) throw ConfigError("build_allocation: user index out of range");
    if (M_q < 1 || N_q < 1) throw ConfigError("build_allocation: empty allocation");

    AllocationPair a;
    a.scheme = scheme;
    a.user = q;
    a.M = M;
    a.N = N;

    if (Q == 1) {  // single user owns all bins regardless of scheme
        if (M_q != M || N_q != N)
            throw ConfigError("build_allocation: Q=1 requires M_q=M, N_q=N");
        a.delay_bins = all_bins(M);
        a.doppler_bins = all_bins(N);
        return a;
    }

    switch (scheme) {
        case Scheme::GbbmaDelay:
            // gamma_tau = I_M, gamma_nu = I_Nq (x) [0..1..0]; N_q = floor(N/Q)
            if (M_q != M || N_q != N / Q || N % Q != 0)
                throw ConfigError("gbbma-delay: need M_q=M, N_q=N/Q with Q | N");
            a.delay_bins = all_bins(M);
            a.doppler_bins = comb_bins(N, N_q, q);
            break;
        case Scheme::GbbmaDoppler:
            if (N_q != N || M_q != M / Q || M % Q != 0)
                throw ConfigError("gbbma-doppler: need N_q=N, M_q=M/Q with Q | M");
            a.delay_bins = comb_bins(M, M_q, q);
            a.doppler_bins = all_bins(N);
            break;
        case Scheme::Itfma: {
            int b_tau = M / M_q, b_nu = N / N_q;
            if (b_tau * b_nu < Q || M % M_q != 0 || N % N_q != 0)
                throw ConfigError("itfma: block grid too small for Q users");
            int qt = q % b_tau, qn = q / b_tau;
            a.delay_bins = block_bins(M_q, qt);
            a.doppler_bins = block_bins(N_q, qn);
            break;
        }
        case Scheme::Iddma: {
            int b_tau = M / M_q, b_nu = N / N_q;
            if (b_tau * b_nu < Q || M % M_q != 0 || N % N_q != 0)
                throw ConfigError("iddma: interleave grid too small for Q users");
            int qt = q % b_tau, qn = q / b_tau;
            a.delay_bins = comb_bins(M, M_q, qt);
            a.doppler_bins = comb_bins(N, N_q, qn);
            break;
        }
        case Scheme::GenMAExplicit:
            throw ConfigError("build_allocation: use explicit_allocation for GenMA");
    }
    return a;
}

Mat map_data(const Mat& data, const AllocationPair& alloc) {
    if (data.rows() != static_cast<Eigen::Index>(alloc.delay_bins.size()) ||
        data.cols() != static_cast<Eigen::Index>(alloc.doppler_bins.size()))
        throw ConfigError("map_data: data shape does not match allocation");
    Mat D = Mat::Zero(alloc.M, alloc.N);
    for (size_t r = 0; r < alloc.delay_bins.size(); ++r)
        for (size_t c = 0; c < alloc.doppler_bins.size(); ++c)
            D(alloc.delay_bins[r], alloc.doppler_bins[c]) = data(r, c);
    return D;
}

DelayDopplerFrame otfs_modulate(const Mat& D, const FrameParams& params) {
    if (D.rows() != params.M || D.cols() != params.N)
        throw ConfigError("otfs_modulate: grid shape mismatch");
    DelayDopplerFrame f;
    f.grid = D;
    f.delay_time = D * dft_matrix(params.N).adjoint();
    // column-major vec: x[n*M + l] = X[l, n]
    f.serialized = Eigen::Map<const Vec>(f.delay_time.data(), params.mn());
    f.with_cp.resize(params.n_samples());
    f.with_cp.head(params.L_cp) = f.serialized.tail(params.L_cp);
    f.with_cp.tail(params.mn()) = f.serialized;
    return f;
}

Vec remove_cp_and_demap(const Vec& y_full, const FrameParams& params, int theta_max) {
    const int MN = params.mn();
    const int check_cp = params.L_cp - theta_max;
    if (y_full.size() < MN + check_cp)
        throw ConfigError("remove_cp_and_demap: input shorter than MN + L_cp - theta_max");
    Vec y = y_full.tail(MN);
    Eigen::Map<const Mat> Y(y.data(), params.M, params.N);
    Mat out = Y * dft_matrix(params.N).transpose();  // F_N symmetric: Y*F = (F (x) I) vec
    return Eigen::Map<const Vec>(out.data(), MN);
}

std::vector<Complex> qam_constellation(int order) {
    int side;
    switch (order) {
        case 4: side = 2; break;
        case 16: side = 4; break;
        case 64: side = 8; break;
        default: throw ConfigError("qam_constellation: order must be 4, 16 or 64");
    }
    // Gray-coded per-axis levels {-(side-1), ..., side-1} scaled to unit
    // average energy: E = 2*(side^2-1)/3 per symbol before scaling.
    std::vector<int> gray_level(side);
    for (int g = 0; g < side; ++g) {
        int b = g ^ (g >> 1);  // gray decode index -> position
        gray_level[g] = 2 * b - (side - 1);
    }
    double scale = std::sqrt(3.0 / (2.0 * (side * side - 1.0)));
    std::vector<Complex> pts(order);
    for (int i = 0; i < side; ++i)
        for (int qd = 0; qd < side; ++qd)
            pts[i * side + qd] = scale * Complex(gray_level[i], gray_level[qd]);
    return pts;
}

Vec draw_qam(int count, int order, Rng& rng) {
    auto pts = qam_constellation(order);
    Vec out(count);
    for (int i = 0; i < count; ++i)
        out[i] = pts[static_cast<size_t>(rng.next_u64() % pts.size())];
    return out;
}

}  // namespace otfs
