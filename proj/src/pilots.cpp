#include "otfs/pilots.hpp"

#include <algorithm>
#include <cmath>

namespace otfs {

const char* pilot_structure_name(PilotStructure s) {
    return s == PilotStructure::SuPcp ? "su-pcp" : "mu-pcp";
}

PilotStructure pilot_structure_from_name(const std::string& name) {
    if (name == "su-pcp") return PilotStructure::SuPcp;
    if (name == "mu-pcp") return PilotStructure::MuPcp;
    throw ConfigError("unknown pilot structure: " + name);
}

PcpVector build_pcp(const ZcSequence& zc) {
    const int L = zc.length;
    if (L < 2) throw ConfigError("build_pcp: base length must be >= 2");
    PcpVector p;
    p.base_len = L;
    p.samples.resize(2 * L - 1);
    p.samples.head(L - 1) = zc.samples.tail(L - 1);
    p.samples.tail(L) = zc.samples;
    return p;
}

std::vector<int> PilotLayout::delay_rows(int q) const {
    std::vector<int> rows(2 * pilot_len - 1);
    for (int j = 0; j < 2 * pilot_len - 1; ++j)
        rows[j] = mod(l_anchor[q] - pilot_len + 1 + j, M);
    return rows;
}

PcpVector PilotLayout::pcp(int q) const {
    int w = zc_factor[q];
    // zadoff_chu applies the (2q+1) factor internally; w is odd by construction
    return build_pcp(zadoff_chu(pilot_len, zc_root, (w - 1) / 2, dd_amplitude()));
}

bool PilotLayout::is_reserved(int l, int k) const {
    for (int q = 0; q < Q; ++q) {
        int off = mod(l - (l_anchor[q] - pilot_len + 1), M);
        if (off >= 2 * pilot_len - 1) continue;  // outside this user's delay band
        if (structure == PilotStructure::MuPcp) return true;  // shared band: whole rows
        if (guard == GuardPolicy::Full) return true;
        int d = std::min(mod(k - k_pilot[q], N), mod(k_pilot[q] - k, N));
        if (d <= guard_halfwidth) return true;
    }
    return false;
}

void PilotLayout::validate() const {
    if (pilot_len < 2) throw ConfigError("PilotLayout: pilot_len must be >= 2");
    if (static_cast<int>(l_anchor.size()) != Q || static_cast<int>(k_pilot.size()) != Q)
        throw ConfigError("PilotLayout: per-user arrays must have Q entries");
    if (structure == PilotStructure::SuPcp) {
        // per-user delay spans must be pairwise disjoint
        std::vector<char> used(M, 0);
        for (int q = 0; q < Q; ++q)
            for (int r : delay_rows(q)) {
                if (used[r]) throw ConfigError("PilotLayout: SU-PCP delay spans overlap");
                used[r] = 1;
            }
    }
    for (int q = 0; q < Q; ++q)
        if (k_pilot[q] < 0 || k_pilot[q] >= N)
            throw ConfigError("PilotLayout: pilot Doppler bin out of range");
}

PilotLayout layout_su_pcp(const FrameParams& params, int L_p, GuardPolicy guard,
                          double kappa_max, double sigma_p2) {
    const int M = params.M, N = params.N, Q = params.Q;
    if (M % 2 != 0 || N % 2 != 0)
        throw ConfigError("layout_su_pcp: placement formulas require even M and N");
    int cap = max_users(PilotStructure::SuPcp, params, L_p, kappa_max, 0.5);
    if (Q > cap)
        throw ConfigError("layout_su_pcp: Q exceeds capacity " + std::to_string(cap));

    PilotLayout lay;
    lay.structure = PilotStructure::SuPcp;
    lay.guard = guard;
    lay.M = M;
    lay.N = N;
    lay.Q = Q;
    lay.pilot_len = L_p;
    lay.sigma_p2 = sigma_p2;
    lay.guard_halfwidth = static_cast<int>(std::ceil(2.0 * kappa_max));

    const int l_p = M / 2 + Q / 2 - Q * L_p;
    for (int q = 0; q < Q; ++q) {
        int anchor = l_p + L_p + q * (2 * L_p - 1);
        if (anchor - L_p + 1 < 0 || anchor + L_p - 1 >= M)
            throw ConfigError("layout_su_pcp: pilot block outside the delay axis");
        lay.l_anchor.push_back(anchor);
        lay.k_pilot.push_back(N / 2);
        lay.zc_factor.push_back(zc_user_factor(L_p, q));
    }
    lay.validate();
    return lay;
}

PilotLayout layout_mu_pcp(const FrameParams& params, int L_check_p, double alpha,
                          double kappa_max, double sigma_p2, int l_p) {
    const int M = params.M, N = params.N, Q = params.Q;
    int cap = max_users(PilotStructure::MuPcp, params, L_check_p, kappa_max, alpha);
    if (Q > cap)
        throw ConfigError("layout_mu_pcp: Q exceeds capacity " + std::to_string(cap));
    if (2 * L_check_p - 1 > M)
        throw ConfigError("layout_mu_pcp: pilot block longer than the delay axis");
    if (l_p < 0) l_p = M - 1;

    PilotLayout lay;
    lay.structure = PilotStructure::MuPcp;
    lay.guard = GuardPolicy::Full;
    lay.M = M;
    lay.N = N;
    lay.Q = Q;
    lay.pilot_len = L_check_p;
    lay.sigma_p2 = sigma_p2;

    const int w = N / Q;
    for (int q = 0; q < Q; ++q) {
        lay.l_anchor.push_back(l_p);
        lay.k_pilot.push_back(w / 2 + q * w);
        lay.zc_factor.push_back(1);  // MU-PCP shares one ZC sequence
    }
    lay.validate();
    return lay;
}

Mat embed_pilots(const Mat& data_grid, const PilotLayout& layout, int q) {
    if (data_grid.rows() != layout.M || data_grid.cols() != layout.N)
        throw ConfigError("embed_pilots: grid shape mismatch");
    for (int l = 0; l < layout.M; ++l)
        for (int k = 0; k < layout.N; ++k)
            if (layout.is_reserved(l, k) && data_grid(l, k) != Complex(0, 0))
                throw ConfigError("embed_pilots: data overlaps the pilot/guard region");

    Mat out = data_grid;
    PcpVector p = layout.pcp(q);
    auto rows = layout.delay_rows(q);
    for (size_t j = 0; j < rows.size(); ++j)
        out(rows[j], layout.k_pilot[q]) = p.samples[static_cast<Eigen::Index>(j)];
    return out;
}

Mat transmit_pilot_matrix(const PilotLayout& layout, int q) {
    Mat dd = embed_pilots(Mat::Zero(layout.M, layout.N), layout, q);
    return dd * dft_matrix(layout.N).adjoint();
}

int max_users(PilotStructure structure, const FrameParams& params, int pilot_len,
              double kappa_max, double alpha) {
    if (structure == PilotStructure::SuPcp) {
        int by_roots = pilot_len - 1;
        int by_space = params.M / (2 * pilot_len - 1);
        return std::min(by_roots, by_space);
    }
    double denom = 4.0 * alpha * kappa_max + 1.0;
    int cap = static_cast<int>(std::floor(params.N / denom));
    return std::min(cap, params.N);
}

}  // namespace otfs
