#include "otfs/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace otfs {

int circular_error(int a, int b, int M) {
    int d = mod(a - b, M);
    if (d > M / 2) d -= M;
    return d;
}

LinkWorkspace make_workspace(const LinkScenario& sc) {
    sc.fp.validate();
    const int M = sc.fp.M, N = sc.fp.N, Q = sc.fp.Q;

    int beta_floor = static_cast<int>(std::ceil(2.0 * sc.kappa_max + 1.0));
    if (sc.effective_beta() < beta_floor)
        std::cerr << "warning: beta = " << sc.effective_beta()
                  << " is below the identifiability floor " << beta_floor
                  << " for kappa_max = " << sc.kappa_max << "\n";

    LinkWorkspace ws;
    if (sc.structure == PilotStructure::SuPcp) {
        ws.layout = layout_su_pcp(sc.fp, sc.pilot_len(), sc.guard, sc.kappa_max,
                                  sc.sigma_p2());
    } else {
        ws.layout = layout_mu_pcp(sc.fp, sc.pilot_len(), sc.alpha, sc.kappa_max,
                                  sc.sigma_p2(), sc.mu_pcp_anchor);
    }
    ws.l_ref = pilot_reference_row(ws.layout.pilot_len, M);

    for (int q = 0; q < Q; ++q)
        ws.pilot_matrices.push_back(transmit_pilot_matrix(ws.layout, q));

    // data allocation: scheme cells minus the reserved pilot/guard region
    for (int q = 0; q < Q; ++q) {
        AllocationPair alloc;
        switch (sc.scheme) {
            case Scheme::GbbmaDelay:
                alloc = build_allocation(sc.scheme, q, sc.fp, M, N / Q);
                break;
            case Scheme::GbbmaDoppler:
                alloc = build_allocation(sc.scheme, q, sc.fp, M / Q, N);
                break;
            case Scheme::Itfma:
            case Scheme::Iddma: {
                // prefer the Doppler-major split so user blocks line up with
                // the filter-bank windows
                int b_tau = 1, b_nu = Q;
                for (int bt = 1; bt <= Q; ++bt) {
                    if (Q % bt) continue;
                    int bn = Q / bt;
                    if (M % bt == 0 && N % bn == 0) { b_tau = bt; b_nu = bn; break; }
                }
                alloc = build_allocation(sc.scheme, q, sc.fp, M / b_tau, N / b_nu);
                break;
            }
            case Scheme::GenMAExplicit:
                alloc = build_allocation(Scheme::GbbmaDelay, q, sc.fp, M, N / Q);
                break;
        }
        std::vector<int> cells;
        for (int l : alloc.delay_bins)
            for (int k : alloc.doppler_bins)
                if (!ws.layout.is_reserved(l, k)) cells.push_back(k * M + l);
        ws.allocations.push_back(std::move(alloc));
        ws.data_cells.push_back(std::move(cells));
    }
    return ws;
}

UplinkSignal simulate_uplink(const LinkScenario& sc, const LinkWorkspace& ws,
                             const TrialDrawConfig& draw, Rng& rng) {
    const int Q = sc.fp.Q, Ns = sc.fp.n_samples();
    const int to_max = draw.to_max < 0 ? sc.fp.theta_max : draw.to_max;

    UplinkSignal out;
    out.r = Vec::Zero(Ns);
    const Profile prof = draw.profile_override ? *draw.profile_override : sc.profile;
    const int ch_len = draw.channel_len_override ? *draw.channel_len_override : sc.L_ch;
    for (int q = 0; q < Q; ++q) {
        LtvChannel ch = generate_channel(prof, sc.kappa_max, ch_len, sc.fp, rng);
        ch.user = q;
        ImpairmentSet imp;
        imp.theta = draw.theta_force ? *draw.theta_force : rng.uniform_int(draw.to_min, to_max);
        imp.eps = draw.eps_force ? *draw.eps_force : rng.uniform(draw.cfo_min, draw.cfo_max);
        imp.noise_var = 0.0;  // noise enters once, at the sum

        Mat grid = Mat::Zero(sc.fp.M, sc.fp.N);
        Vec data = draw_qam(static_cast<int>(ws.data_cells[q].size()), sc.qam_order, rng);
        for (size_t i = 0; i < ws.data_cells[q].size(); ++i)
            grid(ws.data_cells[q][i] % sc.fp.M, ws.data_cells[q][i] / sc.fp.M) = data[i];
        grid = embed_pilots(grid, ws.layout, q);

        DelayDopplerFrame frame = otfs_modulate(grid, sc.fp);
        out.r += apply_channel(frame.with_cp, ch, imp, sc.fp, rng);

        out.truth.channels.push_back(std::move(ch));
        out.truth.theta.push_back(imp.theta);
        out.truth.eps.push_back(imp.eps);
    }
    out.r = add_awgn(out.r, sc.noise_var(), rng);
    return out;
}

namespace {

// Detection errors can land outside the CP budget; the extraction stage then
// snaps to the nearest admissible offset.
int clamp_theta(int theta_hat, int theta_max, int M) {
    if (theta_hat >= 0 && theta_hat <= theta_max) return theta_hat;
    int d0 = std::min(mod(theta_hat, M), mod(-theta_hat, M));
    int d1 = std::min(mod(theta_hat - theta_max, M), mod(theta_max - theta_hat, M));
    return d0 <= d1 ? 0 : theta_max;
}

}  // namespace

std::vector<UserSyncResult> run_receiver(const Vec& r, const LinkScenario& sc,
                                         const LinkWorkspace& ws,
                                         const UplinkTruth& truth,
                                         const ReceiverOptions& opt) {
    const int M = sc.fp.M, N = sc.fp.N, Q = sc.fp.Q, MN = sc.fp.mn();
    if (r.size() != sc.fp.n_samples()) throw ConfigError("run_receiver: bad signal length");

    // TO stage works on the first MN samples, the CFO/channel stage on the
    // CP-removed window (last MN samples).
    Eigen::Map<const Mat> R_head(r.data(), M, N);
    Eigen::Map<const Mat> R_tail(r.data() + sc.fp.L_cp, M, N);
    const bool filtered = sc.structure == PilotStructure::MuPcp && Q > 1;

    std::vector<UserSyncResult> results(Q);
    for (int q = 0; q < Q; ++q) {
        UserSyncResult& res = results[q];
        Mat Rq = filtered ? filter_bank_separate(R_head, q, Q) : Mat(R_head);
        TimingMetric metric = timing_metric(Rq, ws.pilot_matrices[q]);
        metric.user = q;

        for (double T : opt.thresholds)
            res.theta_first.push_back(
                detect_first_major_peak(metric, T, ws.l_ref, sc.fp.L_cp, M));
        if (opt.run_highest)
            res.theta_highest = detect_highest_peak(metric, mean_delay(truth.channels[q]),
                                                    ws.l_ref, sc.fp.L_cp,
                                                    ws.layout.pilot_len, M);

        if (!opt.run_cfo && !opt.run_absorbed) continue;

        int theta_used;
        if (opt.perfect_to) {
            theta_used = truth.theta[q];
        } else if (!opt.cfo_use_highest && !res.theta_first.empty()) {
            theta_used = clamp_theta(res.theta_first[opt.cfo_threshold_index],
                                     sc.fp.theta_max, M);
        } else {
            theta_used = clamp_theta(res.theta_highest, sc.fp.theta_max, M);
        }
        res.theta_used = theta_used;

        Mat Yq = filtered ? filter_bank_separate(R_tail, q, Q) : Mat(R_tail);
        Eigen::Map<const Vec> y(Yq.data(), MN);
        PilotRegionObservation obs =
            extract_pilot_region(y, theta_used, ws.layout, q, sc.fp);
        BemBasis basis = cpf_basis(sc.fp.n_samples(), obs.kappa, sc.effective_beta());
        CfoChannelEstimator est(obs, basis);

        if (opt.run_cfo) {
            CfoSearchConfig search = opt.search;
            if (search.max_eps <= search.min_eps)
                search = CfoSearchConfig::defaults_for(N);
            res.eps_hat = est.estimate_cfo(search).eps_hat;
            ChannelEstimate ce = est.estimate_channel(res.eps_hat);
            Mat h_target =
                true_channel_on_region(truth.channels[q], obs, truth.eps[q] - res.eps_hat);
            res.nmse_ml = nmse(ce.h, h_target);
            res.cfo_ran = true;
        }
        if (opt.run_absorbed) {
            ChannelEstimate ce = est.estimate_channel(0.0);
            Mat h_fold = true_channel_on_region(truth.channels[q], obs, truth.eps[q]);
            res.nmse_absorbed = nmse(ce.h, h_fold);
            res.absorbed_ran = true;
        }
    }
    return results;
}

}  // namespace otfs
