#include "otfs/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace otfs {

using nlohmann::json;

std::string VariantSpec::name() const {
    std::string s;
    switch (to) {
        case To::FirstPeak: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "first-peak/q%.2f", threshold_quantile);
            s = buf;
            break;
        }
        case To::HighestPeak: s = "highest-peak"; break;
        case To::Perfect: s = "perfect-to"; break;
    }
    switch (cfo) {
        case Cfo::Ml: s += "+ml"; break;
        case Cfo::Absorbed: s += "+absorbed"; break;
        case Cfo::None: break;
    }
    return s;
}

namespace {

void require_keys(const json& j, const std::vector<std::string>& known,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : known) ok |= (it.key() == k);
        if (!ok) throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

VariantSpec parse_variant(const json& j) {
    require_keys(j, {"to", "threshold_quantile", "cfo"}, "variants[]");
    VariantSpec v;
    std::string to = j.value("to", "first-peak");
    if (to == "first-peak") v.to = VariantSpec::To::FirstPeak;
    else if (to == "highest-peak") v.to = VariantSpec::To::HighestPeak;
    else if (to == "perfect") v.to = VariantSpec::To::Perfect;
    else throw ConfigError("config: unknown TO estimator \"" + to + "\"");
    v.threshold_quantile = j.value("threshold_quantile", 0.5);
    if (v.threshold_quantile < 0.0 || v.threshold_quantile > 1.0)
        throw ConfigError("config: threshold_quantile must be in [0, 1]");
    std::string cfo = j.value("cfo", "ml");
    if (cfo == "ml") v.cfo = VariantSpec::Cfo::Ml;
    else if (cfo == "absorbed") v.cfo = VariantSpec::Cfo::Absorbed;
    else if (cfo == "none") v.cfo = VariantSpec::Cfo::None;
    else throw ConfigError("config: unknown CFO estimator \"" + cfo + "\"");
    return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }

    require_keys(j, {"version", "experiment_id", "frame", "scheme", "pilot", "channel",
                     "snr_db", "users", "trials", "seed", "qam_order", "beta",
                     "cfo", "to", "cfo_search", "variants"}, "top level");

    ExperimentConfig c;
    c.version = j.value("version", 0);
    if (c.version != 1) throw ConfigError("config: unsupported schema version");
    get_if(j, "experiment_id", c.experiment_id);

    if (j.contains("frame")) {
        const auto& f = j.at("frame");
        require_keys(f, {"M", "N", "bandwidth_hz", "theta_max"}, "frame");
        get_if(f, "M", c.M);
        get_if(f, "N", c.N);
        get_if(f, "bandwidth_hz", c.bandwidth_hz);
        get_if(f, "theta_max", c.theta_max);
    }
    get_if(j, "scheme", c.scheme);
    if (j.contains("pilot")) {
        const auto& p = j.at("pilot");
        require_keys(p, {"structure", "guard", "power_db", "alpha", "mu_pcp_anchor"},
                     "pilot");
        get_if(p, "structure", c.pilot_structure);
        get_if(p, "guard", c.guard);
        get_if(p, "power_db", c.pilot_power_db);
        get_if(p, "alpha", c.alpha);
        get_if(p, "mu_pcp_anchor", c.mu_pcp_anchor);
    }
    if (j.contains("channel")) {
        const auto& ch = j.at("channel");
        require_keys(ch, {"profile", "L_ch", "kappa_max"}, "channel");
        get_if(ch, "profile", c.profile);
        get_if(ch, "L_ch", c.L_ch);
        get_if(ch, "kappa_max", c.kappa_max);
    }
    get_if(j, "snr_db", c.snr_db);
    get_if(j, "users", c.users);
    get_if(j, "trials", c.trials);
    get_if(j, "seed", c.seed);
    get_if(j, "qam_order", c.qam_order);
    get_if(j, "beta", c.beta);
    if (j.contains("cfo")) {
        const auto& f = j.at("cfo");
        require_keys(f, {"min", "max"}, "cfo");
        get_if(f, "min", c.cfo_min);
        get_if(f, "max", c.cfo_max);
    }
    if (j.contains("to")) {
        const auto& t = j.at("to");
        require_keys(t, {"min", "max"}, "to");
        get_if(t, "min", c.to_min);
        get_if(t, "max", c.to_max);
    }
    if (j.contains("cfo_search")) {
        const auto& s = j.at("cfo_search");
        require_keys(s, {"min", "max", "step", "refine_tol"}, "cfo_search");
        get_if(s, "min", c.search.min_eps);
        get_if(s, "max", c.search.max_eps);
        get_if(s, "step", c.search.step);
        get_if(s, "refine_tol", c.search.refine_tol);
    }
    if (j.contains("variants")) {
        c.variants.clear();
        for (const auto& v : j.at("variants")) c.variants.push_back(parse_variant(v));
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["version"] = version;
    j["experiment_id"] = experiment_id;
    j["frame"] = {{"M", M}, {"N", N}, {"bandwidth_hz", bandwidth_hz},
                  {"theta_max", theta_max}};
    j["scheme"] = scheme;
    j["pilot"] = {{"structure", pilot_structure}, {"guard", guard},
                  {"power_db", pilot_power_db}, {"alpha", alpha},
                  {"mu_pcp_anchor", mu_pcp_anchor}};
    j["channel"] = {{"profile", profile}, {"L_ch", L_ch}, {"kappa_max", kappa_max}};
    j["snr_db"] = snr_db;
    j["users"] = users;
    j["trials"] = trials;
    j["seed"] = seed;
    j["qam_order"] = qam_order;
    j["beta"] = beta;
    j["cfo"] = {{"min", cfo_min}, {"max", cfo_max}};
    j["to"] = {{"min", to_min}, {"max", to_max}};
    j["cfo_search"] = {{"min", search.min_eps}, {"max", search.max_eps},
                       {"step", search.step}, {"refine_tol", search.refine_tol}};
    j["variants"] = json::array();
    for (const auto& v : variants) {
        json jv;
        jv["to"] = v.to == VariantSpec::To::FirstPeak ? "first-peak"
                   : v.to == VariantSpec::To::HighestPeak ? "highest-peak" : "perfect";
        jv["threshold_quantile"] = v.threshold_quantile;
        jv["cfo"] = v.cfo == VariantSpec::Cfo::Ml ? "ml"
                    : v.cfo == VariantSpec::Cfo::Absorbed ? "absorbed" : "none";
        j["variants"].push_back(jv);
    }
    return j.dump(2);
}

LinkScenario ExperimentConfig::scenario_for(int Q, double kappa, double snr) const {
    LinkScenario sc;
    sc.fp = make_frame_params(M, N, Q, 1.0 / bandwidth_hz, L_ch, theta_max);
    sc.scheme = scheme_from_name(scheme);
    sc.structure = pilot_structure_from_name(pilot_structure);
    sc.guard = guard == "partial" ? GuardPolicy::Partial : GuardPolicy::Full;
    sc.profile = profile_from_name(profile);
    sc.kappa_max = kappa;
    sc.L_ch = L_ch;
    sc.beta = beta;
    sc.pilot_power_db = pilot_power_db;
    sc.alpha = alpha;
    sc.mu_pcp_anchor = mu_pcp_anchor;
    sc.qam_order = qam_order;
    sc.snr_db = snr;
    return sc;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (kappa_max.empty() || snr_db.empty() || users.empty() || variants.empty())
        throw ConfigError("config: sweep lists and variants must be nonempty");
    if (guard != "full" && guard != "partial")
        throw ConfigError("config: guard must be \"full\" or \"partial\"");
    if (cfo_max < cfo_min) throw ConfigError("config: cfo range inverted");
    // building every scenario surfaces capacity/shape violations up front
    for (int Q : users)
        for (double k : kappa_max) {
            LinkScenario sc = scenario_for(Q, k, snr_db.front());
            make_workspace(sc);
            int tmax = to_max < 0 ? theta_max : to_max;
            if (to_min < 0 || tmax > theta_max || to_min > tmax)
                throw ConfigError("config: TO draw range outside [0, theta_max]");
        }
}

SummaryStats aggregate(const std::vector<double>& xs) {
    if (xs.empty()) throw ConfigError("aggregate: empty input");
    auto kahan_sum = [](const std::vector<double>& v, auto f) {
        double sum = 0.0, comp = 0.0;
        for (double x : v) {
            double y = f(x) - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    };
    SummaryStats s;
    s.count = xs.size();
    const double n = static_cast<double>(xs.size());
    s.mean = kahan_sum(xs, [](double x) { return x; }) / n;
    double m = s.mean;
    s.var = kahan_sum(xs, [m](double x) { return (x - m) * (x - m); }) / n;
    s.mse = kahan_sum(xs, [](double x) { return x * x; }) / n;
    return s;
}

int resolve_thread_count(size_t work_items) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("OTFS_SYNC_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(std::min<size_t>(hw, std::max<size_t>(work_items, 1)));
}

namespace {

struct TrialMetrics {
    // per variant: pooled TO errors over users, CFO sq. error, NMSE
    std::vector<std::vector<double>> to_abs_err;
    std::vector<std::vector<double>> to_signed_err;
    std::vector<std::vector<double>> cfo_sq_err;
    std::vector<std::vector<double>> nmse;
};

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         bool measure_time) {
    config.validate();
    std::vector<ResultRecord> records;

    // distinct first-peak thresholds, in variant order
    std::vector<double> quantiles;
    bool any_highest = false;
    for (const auto& v : config.variants) {
        if (v.to == VariantSpec::To::FirstPeak) {
            bool seen = false;
            for (double q : quantiles) seen |= (q == v.threshold_quantile);
            if (!seen) quantiles.push_back(v.threshold_quantile);
        }
        if (v.to == VariantSpec::To::HighestPeak) any_highest = true;
    }

    size_t sweep_index = 0;
    for (int Q : config.users) {
        for (double kappa : config.kappa_max) {
            for (double snr : config.snr_db) {
                auto start = std::chrono::steady_clock::now();
                LinkScenario sc = config.scenario_for(Q, kappa, snr);
                LinkWorkspace ws = make_workspace(sc);

                ThresholdBounds tb = threshold_range(
                    ws.layout.pilot_len, 1.0, std::sqrt(sc.sigma_p2()),
                    std::sqrt(sc.noise_var() / Q), config.M);
                std::vector<double> thresholds;
                for (double q : quantiles)
                    thresholds.push_back(tb.normalized.lower +
                                         q * (tb.normalized.upper - tb.normalized.lower));

                const size_t V = config.variants.size();
                std::vector<TrialMetrics> per_trial(config.trials);

                auto run_trial = [&](int t) {
                    Rng rng(Rng::derive(config.seed, sweep_index, t));
                    TrialDrawConfig draw;
                    draw.cfo_min = config.cfo_min;
                    draw.cfo_max = config.cfo_max;
                    draw.to_min = config.to_min;
                    draw.to_max = config.to_max;
                    UplinkSignal sig = simulate_uplink(sc, ws, draw, rng);

                    TrialMetrics tm;
                    tm.to_abs_err.resize(V);
                    tm.to_signed_err.resize(V);
                    tm.cfo_sq_err.resize(V);
                    tm.nmse.resize(V);

                    for (size_t vi = 0; vi < V; ++vi) {
                        const VariantSpec& v = config.variants[vi];
                        ReceiverOptions opt;
                        opt.thresholds = thresholds;
                        opt.run_highest = any_highest || v.to == VariantSpec::To::HighestPeak;
                        opt.run_cfo = v.cfo == VariantSpec::Cfo::Ml;
                        opt.run_absorbed = v.cfo == VariantSpec::Cfo::Absorbed;
                        opt.perfect_to = v.to == VariantSpec::To::Perfect;
                        opt.cfo_use_highest = v.to == VariantSpec::To::HighestPeak;
                        opt.search = config.search;
                        for (size_t qi = 0; qi < quantiles.size(); ++qi)
                            if (quantiles[qi] == v.threshold_quantile)
                                opt.cfo_threshold_index = static_cast<int>(qi);

                        auto res = run_receiver(sig.r, sc, ws, sig.truth, opt);
                        for (int q = 0; q < Q; ++q) {
                            int theta_hat = 0;
                            switch (v.to) {
                                case VariantSpec::To::FirstPeak:
                                    theta_hat = res[q].theta_first[opt.cfo_threshold_index];
                                    break;
                                case VariantSpec::To::HighestPeak:
                                    theta_hat = res[q].theta_highest;
                                    break;
                                case VariantSpec::To::Perfect:
                                    theta_hat = sig.truth.theta[q];
                                    break;
                            }
                            int err = circular_error(theta_hat, sig.truth.theta[q], config.M);
                            tm.to_abs_err[vi].push_back(std::abs(err));
                            tm.to_signed_err[vi].push_back(err);
                            if (v.cfo == VariantSpec::Cfo::Ml) {
                                double e = res[q].eps_hat - sig.truth.eps[q];
                                tm.cfo_sq_err[vi].push_back(e * e);
                                tm.nmse[vi].push_back(res[q].nmse_ml);
                            } else if (v.cfo == VariantSpec::Cfo::Absorbed) {
                                tm.nmse[vi].push_back(res[q].nmse_absorbed);
                            }
                        }
                    }
                    per_trial[t] = std::move(tm);
                };

                int workers = resolve_thread_count(config.trials);
                if (workers <= 1) {
                    for (int t = 0; t < config.trials; ++t) run_trial(t);
                } else {
                    std::atomic<int> next{0};
                    std::vector<std::thread> pool;
                    for (int w = 0; w < workers; ++w)
                        pool.emplace_back([&] {
                            for (int t = next++; t < config.trials; t = next++) run_trial(t);
                        });
                    for (auto& th : pool) th.join();
                }

                double wall = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start).count();

                // merge in trial order so threading cannot change the output
                for (size_t vi = 0; vi < V; ++vi) {
                    std::vector<double> to_err, to_sgn, cfo_err, nm;
                    for (const auto& tm : per_trial) {
                        to_err.insert(to_err.end(), tm.to_abs_err[vi].begin(), tm.to_abs_err[vi].end());
                        to_sgn.insert(to_sgn.end(), tm.to_signed_err[vi].begin(), tm.to_signed_err[vi].end());
                        cfo_err.insert(cfo_err.end(), tm.cfo_sq_err[vi].begin(), tm.cfo_sq_err[vi].end());
                        nm.insert(nm.end(), tm.nmse[vi].begin(), tm.nmse[vi].end());
                    }
                    ResultRecord rec;
                    rec.experiment_id = config.experiment_id;
                    rec.variant = config.variants[vi].name();
                    rec.scheme = config.scheme;
                    rec.pilot_structure = config.pilot_structure;
                    rec.M = config.M;
                    rec.N = config.N;
                    rec.Q = Q;
                    rec.trials = config.trials;
                    rec.snr_db = snr;
                    rec.kappa_max = kappa;
                    rec.seed = config.seed;
                    SummaryStats to_stats = aggregate(to_err);
                    rec.to_err_mean = to_stats.mean;
                    rec.to_err_var = to_stats.var;
                    rec.to_bias = aggregate(to_sgn).mean;
                    rec.cfo_mse = cfo_err.empty() ? std::nan("") : aggregate(cfo_err).mean;
                    rec.nmse_db = nm.empty() ? std::nan("")
                                             : 10.0 * std::log10(aggregate(nm).mean);
                    rec.wall_seconds = measure_time ? wall : 0.0;
                    records.push_back(std::move(rec));
                }
                ++sweep_index;
            }
        }
    }
    return records;
}

std::string to_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream os;
    os << "experiment_id,variant,M,N,Q,scheme,pilot_structure,snr_db,kappa_max,"
          "trials,to_err_mean,to_err_var,cfo_mse,nmse_db,wall_seconds\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.9g", x);
        return std::string(buf);
    };
    for (const auto& r : records) {
        os << r.experiment_id << ',' << r.variant << ',' << r.M << ',' << r.N << ','
           << r.Q << ',' << r.scheme << ',' << r.pilot_structure << ','
           << num(r.snr_db) << ',' << num(r.kappa_max) << ',' << r.trials << ','
           << num(r.to_err_mean) << ',' << num(r.to_err_var) << ',' << num(r.cfo_mse)
           << ',' << num(r.nmse_db) << ',' << num(r.wall_seconds) << '\n';
    }
    return os.str();
}

ExperimentConfig preset_to_sweep() {
    ExperimentConfig c;
    c.experiment_id = "to_sweep";
    c.snr_db = {0, 5, 10, 15, 20, 25, 30};
    c.users = {2, 4};
    c.trials = 200;
    c.seed = 2024;
    c.variants = {{VariantSpec::To::FirstPeak, 0.25, VariantSpec::Cfo::None},
                  {VariantSpec::To::HighestPeak, 0.5, VariantSpec::Cfo::None}};
    return c;
}

ExperimentConfig preset_cfo_sweep() {
    ExperimentConfig c;
    c.experiment_id = "cfo_sweep";
    c.snr_db = {0, 5, 10, 15, 20, 25, 30};
    c.users = {2};
    c.trials = 200;
    c.seed = 2025;
    c.variants = {{VariantSpec::To::FirstPeak, 0.25, VariantSpec::Cfo::Ml}};
    return c;
}

ExperimentConfig preset_nmse_sweep() {
    // channel NMSE vs CFO magnitude with perfect timing, ML vs absorbed
    ExperimentConfig c;
    c.experiment_id = "nmse_sweep";
    c.snr_db = {20};
    c.users = {1};
    c.trials = 200;
    c.seed = 2026;
    c.variants = {{VariantSpec::To::Perfect, 0.5, VariantSpec::Cfo::Ml},
                  {VariantSpec::To::Perfect, 0.5, VariantSpec::Cfo::Absorbed}};
    return c;
}

std::string gnuplot_script(const std::string& csv_path, const std::string& metric) {
    int col;
    std::string ylabel;
    if (metric == "to") { col = 11; ylabel = "mean |TO error| (samples)"; }
    else if (metric == "cfo") { col = 13; ylabel = "CFO MSE"; }
    else if (metric == "nmse") { col = 14; ylabel = "channel NMSE (dB)"; }
    else throw ConfigError("gnuplot_script: metric must be to, cfo or nmse");

    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n";
    if (metric != "nmse") os << "set logscale y\n";  // nmse_db is already in dB
    os << "set xlabel 'SNR (dB)'\n"
       << "set ylabel '" << ylabel << "'\n"
       << "plot '" << csv_path << "' using 8:" << col << " with linespoints\n";
    return os.str();
}

}  // namespace otfs
