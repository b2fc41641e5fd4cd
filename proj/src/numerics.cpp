#include "otfs/numerics.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace otfs {

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b != 0) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

const Mat& dft_matrix(int N) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Mat>> cache;
    if (N < 1) throw ConfigError("dft_matrix: N must be >= 1");

    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it == cache.end()) {
        auto F = std::make_unique<Mat>(N, N);
        const double scale = 1.0 / std::sqrt(static_cast<double>(N));
        for (int l = 0; l < N; ++l) {
            for (int n = 0; n < N; ++n) {
                // twiddle exponent reduced mod N to keep angles small
                int e = static_cast<int>((static_cast<long long>(l) * n) % N);
                double ang = -2.0 * kPi * e / N;
                (*F)(l, n) = scale * Complex(std::cos(ang), std::sin(ang));
            }
        }
        it = cache.emplace(N, std::move(F)).first;
    }
    return *it->second;
}

Vec unitary_dft(const Vec& x, bool inverse) {
    if (x.size() == 0) throw ConfigError("unitary_dft: empty input");
    const Mat& F = dft_matrix(static_cast<int>(x.size()));
    return inverse ? Vec(F.adjoint() * x) : Vec(F * x);
}

Mat circulant(const Vec& c) {
    const int N = static_cast<int>(c.size());
    if (N == 0) throw ConfigError("circulant: empty first column");
    Mat A(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) A(i, j) = c[mod(i - j, N)];
    return A;
}

Mat least_squares_pinv(const Mat& G) {
    if (G.rows() < G.cols())
        throw ConfigError("least_squares_pinv: more columns than rows");
    Eigen::ColPivHouseholderQR<Mat> qr(G);
    const auto& R = qr.matrixR();
    const int k = static_cast<int>(G.cols());
    double dmax = std::abs(R(0, 0));
    double dmin = std::abs(R(k - 1, k - 1));
    if (qr.rank() < k || dmin <= 0.0) {
        double cond = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
        throw NumericalError("least_squares_pinv: rank-deficient matrix", cond);
    }
    Mat I = Mat::Identity(G.rows(), G.rows());
    return qr.solve(I);
}

int zc_user_factor(int L_p, int q) {
    if (L_p < 2) throw ConfigError("zc_user_factor: L_p must be >= 2");
    std::vector<int> seen;
    for (int k = 0; k < 2 * L_p; ++k) {
        int w = (2 * k + 1) % L_p;
        if (w == 0 || gcd_u64(L_p, w) != 1) continue;
        bool dup = false;
        for (int v : seen) dup |= (v == w);
        if (dup) continue;
        seen.push_back(w);
        if (static_cast<int>(seen.size()) == q + 1) return 2 * k + 1;
    }
    throw ConfigError("zc_user_factor: no distinct valid ZC root left for user " +
                      std::to_string(q) + " at L_p=" + std::to_string(L_p));
}

ZcSequence zadoff_chu(int L_p, int mu, int q, double amplitude) {
    if (L_p < 1) throw ConfigError("zadoff_chu: L_p must be >= 1");
    long long w = (2LL * q + 1) * mu;
    long long wm = ((w % L_p) + L_p) % L_p;
    if (gcd_u64(L_p, static_cast<uint64_t>(wm == 0 ? L_p : wm)) != 1)
        throw ConfigError("zadoff_chu: invalid root, gcd(L_p, mu*(2q+1)) != 1");

    ZcSequence z;
    z.length = L_p;
    z.root = mu;
    z.user = q;
    z.amplitude = amplitude;
    z.samples.resize(L_p);
    for (int i = 0; i < L_p; ++i) {
        // i(i+1) is even, so the phase is 2 pi (w i(i+1)/2 mod L_p) / L_p
        long long tri = (static_cast<long long>(i) * (i + 1) / 2) % L_p;
        long long e = (tri * wm) % L_p;
        double ang = -2.0 * kPi * static_cast<double>(e) / L_p;
        z.samples[i] = amplitude * Complex(std::cos(ang), std::sin(ang));
    }
    return z;
}

}  // namespace otfs
