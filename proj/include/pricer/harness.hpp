#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pricer/environment.hpp"
#include "pricer/trace.hpp"
#include "pricer/valuation_model.hpp"

namespace pricer {

struct ExperimentConfig {
    std::string algorithm;  // cautious | oracle | distribution-free | gamma |
                            // two-valuation | adversarial | grid-ucb
    std::string instance;   // generator selector or instance file
    long long horizon = 0;
    double delta = -1.0;    // defaults to T^-2
    double gamma = -1.0;    // gamma pricer only
    double v1 = -1.0;       // adversarial only
    double v2 = -1.0;
    std::string sequence;   // adversarial: all-v1 | all-v2 | alternating | <file>
    std::vector<std::uint64_t> seeds;
    std::uint64_t master_seed = 1;
    int seed_count = 0;     // used when seeds is empty
    std::string out_dir;    // empty: $PRICER_OUT_DIR, else "."
    bool full_trace = false;
    int jobs = 0;           // 0 = hardware concurrency
    bool zero_demand_one = false;  // distribution-free switch, see module docs

    double effective_delta() const;
    std::vector<std::uint64_t> effective_seeds() const;
    std::string effective_out_dir() const;
};

// key = value text file; '#' starts a comment.  Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);

struct RunResult {
    std::uint64_t seed = 0;
    long long rounds = 0;
    double final_regret = 0.0;
    double realized_revenue = 0.0;
    // Cumulative pseudo-regret at t = 1, 2, 4, ... plus the horizon.
    std::vector<std::pair<long long, double>> geometric_checkpoints;
    // Cumulative pseudo-regret at t = 100, 1000, ... up to the horizon.
    std::vector<std::pair<long long, double>> decade_checkpoints;
    RegretTrace trace;  // filled only when full_trace is set
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::string resolved_instance;  // text form of the instance (empty for adversarial)
    std::vector<RunResult> runs;    // ordered as the seed list
    double mean_final_regret = 0.0;
    double stderr_final_regret = 0.0;
    double max_final_regret = 0.0;
    std::vector<std::pair<long long, double>> decade_means;
    bool out_of_contract = false;  // gamma pricer run with gamma > p_min
};

ExperimentSummary run_experiment(const ExperimentConfig& config);

// Deterministic CSV renderings (the reproducibility contract is on these).
std::string runs_csv(const ExperimentSummary& summary);
std::string summary_csv(const ExperimentSummary& summary);
std::string plot_csv(const ExperimentSummary& summary);
std::string trace_csv(const RunResult& run);

// Writes runs.csv, summary.csv, plot.csv (and trace_<seed>.csv with
// full_trace) under the configured output directory.
void write_outputs(const ExperimentSummary& summary);

struct ScalingPoint {
    long long horizon;
    double mean_regret;
};

struct ScalingReport {
    double slope = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<ScalingPoint> points;
};

// Least-squares fit of log regret against log T; needs >= 3 points.
ScalingReport fit_scaling(const std::vector<ScalingPoint>& points);

// Baseline for separation checks: UCB1 over ceil(sqrt(T)) evenly spaced
// prices.
void run_grid_ucb(SaleFeed& feed, TraceRecorder& rec, long long T, double delta);

// Adversary sequence files: one valuation index (1 or 2) per line.
std::vector<double> load_sequence_file(const std::string& path, double v1, double v2);

}  // namespace pricer
