#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pricer/harness.hpp"
#include "pricer/valuation_model.hpp"

namespace {

void add_common_options(CLI::App* cmd, pricer::ExperimentConfig& cfg, std::string& config_path,
                        std::string& seeds_text) {
    cmd->add_option("--config", config_path, "config file (key = value); flags override");
    cmd->add_option("--algo", cfg.algorithm,
                    "cautious | oracle | distribution-free | gamma | two-valuation | "
                    "adversarial | grid-ucb");
    cmd->add_option("--instance", cfg.instance, "instance selector or file");
    cmd->add_option("--T", cfg.horizon, "time horizon");
    cmd->add_option("--delta", cfg.delta, "confidence parameter (default T^-2)");
    cmd->add_option("--gamma", cfg.gamma, "lower bound on the smallest demand drop");
    cmd->add_option("--v1", cfg.v1, "adversarial: lower valuation");
    cmd->add_option("--v2", cfg.v2, "adversarial: known upper valuation");
    cmd->add_option("--sequence", cfg.sequence, "adversarial: all-v1|all-v2|alternating|file");
    cmd->add_option("--seeds", seeds_text, "comma separated seed list");
    cmd->add_option("--master-seed", cfg.master_seed, "master seed for derived streams");
    cmd->add_option("--seed-count", cfg.seed_count, "number of derived seeds");
    cmd->add_option("--out", cfg.out_dir, "output directory (default $PRICER_OUT_DIR or .)");
    cmd->add_option("--jobs", cfg.jobs, "parallel replications (0 = hardware)");
    cmd->add_flag("--full-trace", cfg.full_trace, "write per-round trace files");
    cmd->add_flag("--zero-demand-one", cfg.zero_demand_one,
                  "distribution-free: store demand 1 at price 0 instead of the printed 0");
}

pricer::ExperimentConfig merge_config(const pricer::ExperimentConfig& flags,
                                      const std::string& config_path,
                                      const std::string& seeds_text) {
    pricer::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = pricer::load_config(config_path);
    // Flags override file values wherever they were provided.
    if (!flags.algorithm.empty()) cfg.algorithm = flags.algorithm;
    if (!flags.instance.empty()) cfg.instance = flags.instance;
    if (flags.horizon > 0) cfg.horizon = flags.horizon;
    if (flags.delta > 0) cfg.delta = flags.delta;
    if (flags.gamma > 0) cfg.gamma = flags.gamma;
    if (flags.v1 >= 0) cfg.v1 = flags.v1;
    if (flags.v2 >= 0) cfg.v2 = flags.v2;
    if (!flags.sequence.empty()) cfg.sequence = flags.sequence;
    if (flags.master_seed != 1) cfg.master_seed = flags.master_seed;
    if (flags.seed_count > 0) cfg.seed_count = flags.seed_count;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.jobs > 0) cfg.jobs = flags.jobs;
    cfg.full_trace = cfg.full_trace || flags.full_trace;
    cfg.zero_demand_one = cfg.zero_demand_one || flags.zero_demand_one;
    if (!seeds_text.empty()) {
        cfg.seeds.clear();
        std::stringstream ss(seeds_text);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.seeds.push_back(std::stoull(item));
    }
    return cfg;
}

int cmd_run(const pricer::ExperimentConfig& cfg) {
    auto summary = pricer::run_experiment(cfg);
    pricer::write_outputs(summary);
    std::printf("runs: %zu\n", summary.runs.size());
    std::printf("mean final regret: %.6g\n", summary.mean_final_regret);
    std::printf("max final regret:  %.6g\n", summary.max_final_regret);
    if (summary.out_of_contract) {
        std::printf("note: out of contract (gamma exceeds the smallest demand drop)\n");
    }
    std::printf("outputs in %s\n", cfg.effective_out_dir().c_str());
    return 0;
}

int cmd_sweep(const pricer::ExperimentConfig& base, const std::string& grid_text) {
    std::vector<long long> grid;
    std::stringstream ss(grid_text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stoll(item));
    if (grid.size() < 3) {
        std::fprintf(stderr, "sweep needs at least 3 horizon points\n");
        return 1;
    }
    std::vector<pricer::ScalingPoint> points;
    std::ostringstream csv;
    csv << "T,mean_regret,stderr\n";
    for (long long T : grid) {
        pricer::ExperimentConfig cfg = base;
        cfg.horizon = T;
        auto summary = pricer::run_experiment(cfg);
        points.push_back({T, summary.mean_final_regret});
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n", T, summary.mean_final_regret,
                      summary.stderr_final_regret);
        csv << buf;
        std::printf("T=%lld  mean regret %.6g  (stderr %.3g)\n", T, summary.mean_final_regret,
                    summary.stderr_final_regret);
    }
    auto report = pricer::fit_scaling(points);
    std::printf("log-log slope: %.4f  [%.4f, %.4f]\n", report.slope, report.ci_low,
                report.ci_high);
    char line[160];
    std::snprintf(line, sizeof(line), "slope,%.17g\nci_low,%.17g\nci_high,%.17g\n", report.slope,
                  report.ci_low, report.ci_high);
    namespace fs = std::filesystem;
    fs::create_directories(base.effective_out_dir());
    std::ofstream out(fs::path(base.effective_out_dir()) / "sweep.csv", std::ios::binary);
    out << csv.str() << line;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic pricing simulator"};
    app.require_subcommand(1);

    pricer::ExperimentConfig flags;
    flags.v1 = -1;
    flags.v2 = -1;
    std::string config_path, seeds_text, grid_text, emit_name, emit_path;

    CLI::App* run = app.add_subcommand("run", "run one experiment over its seed list");
    add_common_options(run, flags, config_path, seeds_text);

    CLI::App* sweep = app.add_subcommand("sweep", "scaling study over a horizon grid");
    add_common_options(sweep, flags, config_path, seeds_text);
    sweep->add_option("--T-grid", grid_text, "comma separated horizons (>= 3)")->required();

    CLI::App* instances = app.add_subcommand("instances", "list or emit instance generators");
    instances->add_option("--emit", emit_name, "generator selector to materialize");
    instances->add_option("--to", emit_path, "output instance file");

    CLI::App* trace = app.add_subcommand("trace", "single-seed per-round dump");
    add_common_options(trace, flags, config_path, seeds_text);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(instances)) {
            if (emit_name.empty()) {
                for (const auto& name : pricer::instance_generator_names()) {
                    std::printf("%s\n", name.c_str());
                }
                return 0;
            }
            auto model = pricer::make_instance(emit_name);
            if (emit_path.empty()) {
                std::printf("%s", pricer::instance_to_text(model).c_str());
            } else {
                pricer::save_instance(model, emit_path);
                std::printf("wrote %s\n", emit_path.c_str());
            }
            return 0;
        }
        pricer::ExperimentConfig cfg = merge_config(flags, config_path, seeds_text);
        if (app.got_subcommand(trace)) {
            cfg.full_trace = true;
            if (cfg.seeds.empty() && cfg.seed_count == 0) cfg.seed_count = 1;
        }
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg, grid_text);
        return cmd_run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
