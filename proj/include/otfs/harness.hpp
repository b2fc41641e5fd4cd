#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/receiver.hpp"

namespace otfs {

struct VariantSpec {
    enum class To { FirstPeak, HighestPeak, Perfect };
    enum class Cfo { Ml, Absorbed, None };
    To to = To::FirstPeak;
    double threshold_quantile = 0.5;  // position within the derived range
    Cfo cfo = Cfo::Ml;
    std::string name() const;
};

struct ExperimentConfig {
    int version = 1;
    std::string experiment_id = "experiment";
    int M = 128, N = 32;
    double bandwidth_hz = 3.84e6;
    int theta_max = 8;
    std::string scheme = "gbbma-delay";
    std::string pilot_structure = "mu-pcp";
    std::string guard = "full";
    double pilot_power_db = 40.0;
    double alpha = 0.5;
    int mu_pcp_anchor = -1;
    std::string profile = "eva";
    int L_ch = 10;
    std::vector<double> kappa_max = {2.91};
    std::vector<double> snr_db = {20.0};
    std::vector<int> users = {2};
    int trials = 100;
    uint64_t seed = 1;
    int qam_order = 16;
    int beta = 0;  // 0 = auto
    double cfo_min = -0.5, cfo_max = 0.5;
    int to_min = 0, to_max = -1;
    // search window sized to the CFO draw range plus margin
    CfoSearchConfig search{-0.6, 0.6, 0.05, 1e-4};
    std::vector<VariantSpec> variants = {
        {VariantSpec::To::FirstPeak, 0.5, VariantSpec::Cfo::Ml}};

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json_text() const;

    LinkScenario scenario_for(int Q, double kappa, double snr) const;
    // Surfaces capacity/shape violations before any trial runs.
    void validate() const;
};

struct SummaryStats {
    double mean = 0.0;
    double var = 0.0;
    double mse = 0.0;
    size_t count = 0;
};

// Compensated (Kahan) accumulation; permutation-invariant to ~1e-12.
SummaryStats aggregate(const std::vector<double>& xs);

struct ResultRecord {
    std::string experiment_id, variant, scheme, pilot_structure;
    int M = 0, N = 0, Q = 0, trials = 0;
    double snr_db = 0, kappa_max = 0;
    double to_err_mean = 0, to_err_var = 0;  // over |circular error|
    double to_bias = 0;  // signed mean, reported in the run summary, not the CSV
    double cfo_mse = 0, nmse_db = 0;  // NaN when the variant does not compute them
    double wall_seconds = 0;
    uint64_t seed = 0;
};

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         bool measure_time = false);

std::string to_csv(const std::vector<ResultRecord>& records);

// Preset configs mirroring the headline sweeps (TO error vs SNR, CFO MSE vs
// SNR, channel NMSE vs CFO).
ExperimentConfig preset_to_sweep();
ExperimentConfig preset_cfo_sweep();
ExperimentConfig preset_nmse_sweep();

// Worker-count resolution; honors the OTFS_SYNC_THREADS environment cap.
int resolve_thread_count(size_t work_items);

// gnuplot script for a CSV produced by run/to-sweep/cfo-sweep/nmse-sweep.
std::string gnuplot_script(const std::string& csv_path, const std::string& metric);

}  // namespace otfs
