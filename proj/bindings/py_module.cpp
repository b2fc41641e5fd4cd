#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "otfs/acceptance.hpp"
#include "otfs/analysis.hpp"
#include "otfs/harness.hpp"

namespace py = pybind11;
using namespace otfs;

namespace {

using CVec = std::vector<Complex>;
using CMatRows = std::vector<std::vector<Complex>>;

Vec to_vec(const CVec& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

CVec from_vec(const Vec& v) {
    return CVec(v.data(), v.data() + v.size());
}

Mat to_mat(const CMatRows& rows) {
    if (rows.empty()) throw ConfigError("empty matrix");
    Mat out(static_cast<Eigen::Index>(rows.size()),
            static_cast<Eigen::Index>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ConfigError("ragged matrix");
        for (size_t j = 0; j < rows[i].size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return out;
}

// One synchronized uplink trial; returns per-user estimates as dicts.
// channel_len draws a shorter realized channel than the design length
// (0 keeps the design value).
py::list run_trial(int M, int N, int Q, double kappa_max, double snr_db,
                   const std::string& structure, const std::string& profile,
                   int L_ch, uint64_t seed, bool run_cfo, int channel_len) {
    ExperimentConfig cfg;
    cfg.M = M;
    cfg.N = N;
    cfg.pilot_structure = structure;
    cfg.profile = profile;
    cfg.L_ch = L_ch;
    LinkScenario sc = cfg.scenario_for(Q, kappa_max, snr_db);
    LinkWorkspace ws = make_workspace(sc);

    ThresholdBounds tb = threshold_range(ws.layout.pilot_len, 1.0,
                                         std::sqrt(sc.sigma_p2()),
                                         std::sqrt(sc.noise_var() / Q), M);
    ReceiverOptions opt;
    opt.thresholds = {0.5 * (tb.normalized.lower + tb.normalized.upper)};
    opt.run_cfo = run_cfo;
    opt.search = {-0.6, 0.6, 0.05, 1e-4};

    Rng rng(seed);
    TrialDrawConfig draw;
    if (channel_len > 0) draw.channel_len_override = channel_len;
    UplinkSignal sig = simulate_uplink(sc, ws, draw, rng);
    auto res = run_receiver(sig.r, sc, ws, sig.truth, opt);

    py::list out;
    for (int q = 0; q < Q; ++q) {
        py::dict d;
        d["theta_true"] = sig.truth.theta[q];
        d["theta_hat"] = res[q].theta_first[0];
        d["eps_true"] = sig.truth.eps[q];
        if (run_cfo) {
            d["eps_hat"] = res[q].eps_hat;
            d["nmse"] = res[q].nmse_ml;
        }
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "uplink multiuser OTFS time/frequency synchronization";

    m.def("zadoff_chu",
          [](int L, int mu, int q, double amp) {
              return from_vec(zadoff_chu(L, mu, q, amp).samples);
          },
          py::arg("length"), py::arg("root") = 1, py::arg("user") = 0,
          py::arg("amplitude") = 1.0);

    m.def("build_pcp",
          [](int L, int mu, int q, double amp) {
              return from_vec(build_pcp(zadoff_chu(L, mu, q, amp)).samples);
          },
          py::arg("length"), py::arg("root") = 1, py::arg("user") = 0,
          py::arg("amplitude") = 1.0);

    m.def("unitary_dft",
          [](const CVec& x, bool inverse) { return from_vec(unitary_dft(to_vec(x), inverse)); },
          py::arg("x"), py::arg("inverse") = false);

    m.def("filter_taps",
          [](int N, int Q, int q) { return from_vec(filter_taps(N, Q, q)); });

    m.def("timing_metric",
          [](const CMatRows& R, const CMatRows& Z) {
              TimingMetric tm = timing_metric(to_mat(R), to_mat(Z));
              return std::vector<double>(tm.values.data(), tm.values.data() + tm.values.size());
          });

    m.def("threshold_range", [](int L, double sigma_s, double sigma_p) {
        ThresholdBounds tb = threshold_range(L, sigma_s, sigma_p, 0.0, 1);
        return py::make_tuple(tb.normalized.lower, tb.normalized.upper);
    });

    m.def("cpf_basis", [](long N_s, const std::vector<long>& kappa, int beta) {
        BemBasis b = cpf_basis(N_s, kappa, beta);
        std::vector<std::vector<double>> rows(b.B.rows());
        for (Eigen::Index r = 0; r < b.B.rows(); ++r)
            for (int g = 0; g < b.beta; ++g) rows[r].push_back(b.B(r, g));
        return rows;
    });

    m.def("max_users", [](const std::string& structure, int M, int N, int pilot_len,
                          double kappa_max, double alpha) {
        FrameParams fp = make_frame_params(M, N, 1, 1.0 / 3.84e6, 10, 8);
        return max_users(pilot_structure_from_name(structure), fp, pilot_len,
                         kappa_max, alpha);
    }, py::arg("structure"), py::arg("M"), py::arg("N"), py::arg("pilot_len"),
       py::arg("kappa_max"), py::arg("alpha") = 0.5);

    m.def("spectral_efficiency", [](const std::string& variant, int M, int N, int Q,
                                    int L_ch, int L_cp, double kappa, int beta) {
        analysis::EfficiencyVariant v;
        if (variant == "su-full") v = analysis::EfficiencyVariant::SuFullGuard;
        else if (variant == "su-partial") v = analysis::EfficiencyVariant::SuPartialGuard;
        else if (variant == "mu") v = analysis::EfficiencyVariant::MuPcp;
        else throw ConfigError("variant must be su-full, su-partial or mu");
        return analysis::spectral_efficiency(v, M, N, Q, L_ch, L_cp, kappa, beta);
    });

    m.def("complexity_cms", [](const std::string& technique, int M, int N, int Q,
                               int L_ch, double kappa) {
        analysis::Technique t;
        if (technique == "su-pcp") t = analysis::Technique::SuPcp;
        else if (technique == "mu-pcp") t = analysis::Technique::MuPcp;
        else if (technique == "absorbed") t = analysis::Technique::AbsorbedCfo;
        else throw ConfigError("technique must be su-pcp, mu-pcp or absorbed");
        return analysis::complexity_cms(t, M, N, Q, L_ch, kappa);
    });

    m.def("doppler_energy_concentration", &analysis::doppler_energy_concentration);
    m.def("doppler_energy_inverse", &analysis::doppler_energy_inverse);

    m.def("run_experiment_csv", [](const std::string& config_json) {
        return to_csv(run_experiment(ExperimentConfig::from_json_text(config_json)));
    });

    m.def("run_trial", &run_trial, py::arg("M") = 128, py::arg("N") = 32,
          py::arg("Q") = 2, py::arg("kappa_max") = 2.91, py::arg("snr_db") = 20.0,
          py::arg("structure") = "mu-pcp", py::arg("profile") = "eva",
          py::arg("L_ch") = 10, py::arg("seed") = 1, py::arg("run_cfo") = false,
          py::arg("channel_len") = 0);

    m.def("validate", [](const std::vector<int>& ids) {
        std::ostringstream os;
        auto results = acceptance::run(ids, os);
        return py::make_tuple(acceptance::all_passed(results), os.str());
    }, py::arg("ids") = std::vector<int>{});
}
