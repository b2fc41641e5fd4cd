#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "otfs/acceptance.hpp"
#include "otfs/analysis.hpp"
#include "otfs/harness.hpp"

namespace {

using namespace otfs;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

int run_config(const ExperimentConfig& config, const std::string& out_path,
               bool timing) {
    auto records = run_experiment(config, timing);
    std::string csv = to_csv(records);
    if (out_path.empty() || out_path == "-")
        std::cout << csv;
    else
        write_file(out_path, csv);

    // signed-bias summary (the CSV carries the absolute-error form)
    for (const auto& r : records)
        std::cerr << r.variant << " Q=" << r.Q << " snr=" << r.snr_db
                  << " kappa=" << r.kappa_max << ": |to_err| mean " << r.to_err_mean
                  << ", signed bias " << r.to_bias << "\n";
    std::cerr << "wrote " << records.size() << " rows";
    if (!out_path.empty() && out_path != "-") std::cerr << " to " << out_path;
    std::cerr << "\n";
    return 0;
}

void add_preset_overrides(CLI::App* cmd, ExperimentConfig& config,
                          std::string& out_path, bool& timing, bool& emit_config) {
    cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    cmd->add_option("--trials", config.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seed", config.seed, "master seed");
    cmd->add_option("--users", config.users, "user counts to sweep");
    cmd->add_option("--snr", config.snr_db, "SNR points in dB");
    cmd->add_option("--kappa", config.kappa_max, "normalized Doppler spreads");
    cmd->add_option("--structure", config.pilot_structure, "su-pcp or mu-pcp");
    cmd->add_flag("--timing", timing, "record measured wall time in the CSV");
    cmd->add_flag("--emit-config", emit_config, "print the JSON config and exit");
}

int analyze(const std::string& what, int M, int N, int Q, int L_ch, int L_cp,
            double kappa, int beta, int L_p, double alpha) {
    using namespace analysis;
    if (what == "efficiency") {
        std::cout << "spectral efficiency at M=" << M << " N=" << N << " Q=" << Q
                  << " L_ch=" << L_ch << " L_cp=" << L_cp << " kappa_max=" << kappa
                  << " beta=" << beta << "\n";
        std::cout << "  su-pcp full guards:    "
                  << spectral_efficiency(EfficiencyVariant::SuFullGuard, M, N, Q, L_ch,
                                         L_cp, kappa, beta) << "\n";
        std::cout << "  su-pcp partial guards: "
                  << spectral_efficiency(EfficiencyVariant::SuPartialGuard, M, N, Q,
                                         L_ch, L_cp, kappa, beta) << "\n";
        std::cout << "  mu-pcp:                "
                  << spectral_efficiency(EfficiencyVariant::MuPcp, M, N, Q, L_ch, L_cp,
                                         kappa, beta) << "\n";
        if (Q >= 2) {
            auto cc = crossover_conditions(M, N, Q, L_ch, kappa);
            std::cout << "  crossover: beta <= " << cc.beta_vs_full
                      << " (vs full guards), beta <= " << cc.beta_vs_partial
                      << " (vs partial guards)\n";
            std::cout << "  crossover: kappa_max <= " << cc.kappa_vs_full
                      << " (vs full guards); partial-guard condition "
                      << (cc.partial_feasible ? "kappa_max <= " + std::to_string(cc.kappa_vs_partial)
                                              : std::string("infeasible")) << "\n";
        }
        return 0;
    }
    if (what == "complexity") {
        std::cout << "complex multiplications at M=" << M << " N=" << N << " Q=" << Q
                  << " L_ch=" << L_ch << " kappa_max=" << kappa << "\n";
        std::cout << "  su-pcp:       " << complexity_cms(Technique::SuPcp, M, N, Q, L_ch, kappa) << "\n";
        std::cout << "  mu-pcp:       " << complexity_cms(Technique::MuPcp, M, N, Q, L_ch, kappa) << "\n";
        std::cout << "  absorbed-cfo: " << complexity_cms(Technique::AbsorbedCfo, M, N, Q, L_ch, kappa) << "\n";
        return 0;
    }
    if (what == "capacity") {
        FrameParams fp = make_frame_params(M, N, std::max(Q, 1), 1.0 / 3.84e6, L_ch, 8);
        std::cout << "max users, su-pcp (L_p=" << L_p << "): "
                  << max_users(PilotStructure::SuPcp, fp, L_p, kappa, alpha) << "\n";
        std::cout << "max users, mu-pcp (alpha=" << alpha << ", kappa_max=" << kappa
                  << "): " << max_users(PilotStructure::MuPcp, fp, L_p, kappa, alpha)
                  << "\n";
        return 0;
    }
    if (what == "doppler-energy") {
        std::cout << doppler_energy_report();
        return 0;
    }
    throw ConfigError("analyze: unknown --what " + what);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uplink multiuser OTFS time/frequency synchronization simulator"};
    app.require_subcommand(1);

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "run a JSON experiment config");
    std::string config_path, out_path;
    bool timing = false;
    run_cmd->add_option("--config", config_path, "JSON config file")->required();
    run_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    run_cmd->add_flag("--timing", timing, "record measured wall time in the CSV");

    // --- presets ---
    bool emit_config = false;
    ExperimentConfig to_cfg = preset_to_sweep();
    std::string to_out;
    auto* to_cmd = app.add_subcommand("to-sweep", "TO error vs SNR preset");
    add_preset_overrides(to_cmd, to_cfg, to_out, timing, emit_config);

    ExperimentConfig cfo_cfg = preset_cfo_sweep();
    std::string cfo_out;
    auto* cfo_cmd = app.add_subcommand("cfo-sweep", "CFO MSE vs SNR preset");
    add_preset_overrides(cfo_cmd, cfo_cfg, cfo_out, timing, emit_config);

    ExperimentConfig nmse_cfg = preset_nmse_sweep();
    std::string nmse_out;
    std::vector<double> nmse_eps = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    auto* nmse_cmd = app.add_subcommand("nmse-sweep",
                                        "channel NMSE vs CFO preset (perfect TO)");
    add_preset_overrides(nmse_cmd, nmse_cfg, nmse_out, timing, emit_config);
    nmse_cmd->add_option("--eps", nmse_eps, "CFO points to sweep");

    // --- analyze ---
    auto* an_cmd = app.add_subcommand("analyze", "closed-form tables");
    std::string what;
    int M = 128, N = 32, Q = 4, L_ch = 10, L_cp = 30, beta = 7, L_p = 10;
    double kappa = 2.91, alpha = 0.5;
    an_cmd->add_option("--what", what, "efficiency|complexity|capacity|doppler-energy")
        ->required();
    an_cmd->add_option("--M", M);
    an_cmd->add_option("--N", N);
    an_cmd->add_option("--Q", Q);
    an_cmd->add_option("--L-ch", L_ch);
    an_cmd->add_option("--L-cp", L_cp);
    an_cmd->add_option("--kappa-max", kappa);
    an_cmd->add_option("--beta", beta);
    an_cmd->add_option("--L-p", L_p);
    an_cmd->add_option("--alpha", alpha);

    // --- validate ---
    auto* val_cmd = app.add_subcommand("validate", "run the oracle/invariant suite");
    std::vector<int> criterion_ids;
    val_cmd->add_option("--id", criterion_ids, "criterion ids to run (default all)");

    // --- plot-script ---
    auto* plot_cmd = app.add_subcommand("plot-script", "emit a gnuplot script for a CSV");
    std::string csv_path, gp_out, metric = "to";
    plot_cmd->add_option("--csv", csv_path, "CSV produced by run/sweeps")->required();
    plot_cmd->add_option("--metric", metric, "to|cfo|nmse");
    plot_cmd->add_option("--out", gp_out, "script path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run_config(ExperimentConfig::from_json_file(config_path), out_path, timing);
        for (auto [cmd, cfg, out] : {std::tuple{to_cmd, &to_cfg, &to_out},
                                     std::tuple{cfo_cmd, &cfo_cfg, &cfo_out},
                                     std::tuple{nmse_cmd, &nmse_cfg, &nmse_out}}) {
            if (!*cmd) continue;
            if (cmd == nmse_cmd) {
                // the eps sweep rides on the CFO draw bounds, one point per run
                std::vector<ResultRecord> all;
                for (double e : nmse_eps) {
                    ExperimentConfig c = *cfg;
                    c.cfo_min = c.cfo_max = e;
                    c.experiment_id += "_eps" + std::to_string(e);
                    if (emit_config) { std::cout << c.to_json_text() << "\n"; continue; }
                    auto rec = run_experiment(c, timing);
                    all.insert(all.end(), rec.begin(), rec.end());
                }
                if (!emit_config) {
                    std::string csv = to_csv(all);
                    if (out->empty() || *out == "-") std::cout << csv;
                    else write_file(*out, csv);
                }
                return 0;
            }
            if (emit_config) { std::cout << cfg->to_json_text() << "\n"; return 0; }
            return run_config(*cfg, *out, timing);
        }
        if (*an_cmd) return analyze(what, M, N, Q, L_ch, L_cp, kappa, beta, L_p, alpha);
        if (*val_cmd) {
            auto results = acceptance::run(criterion_ids, std::cout);
            return acceptance::all_passed(results) ? 0 : 3;
        }
        if (*plot_cmd) {
            std::string script = gnuplot_script(csv_path, metric);
            if (gp_out.empty() || gp_out == "-") std::cout << script;
            else write_file(gp_out, script);
            return 0;
        }
    } catch (const otfs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const otfs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
