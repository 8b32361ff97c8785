#include "pricer/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pricer/adversarial.hpp"
#include "pricer/bandit.hpp"
#include "pricer/cautious_search.hpp"
#include "pricer/distribution_free.hpp"
#include "pricer/environment.hpp"
#include "pricer/gamma_pricer.hpp"
#include "pricer/oracle_pricer.hpp"
#include "pricer/two_valuation.hpp"

namespace pricer {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

bool algorithm_is_adversarial(const std::string& a) { return a == "adversarial"; }

bool algorithm_known(const std::string& a) {
    static const std::set<std::string> known = {
        "cautious", "oracle", "distribution-free", "gamma",
        "two-valuation", "adversarial", "grid-ucb"};
    return known.count(a) > 0;
}

}  // namespace

double ExperimentConfig::effective_delta() const {
    if (delta > 0.0) return delta;
    const double T = static_cast<double>(horizon);
    return 1.0 / (T * T);
}

std::vector<std::uint64_t> ExperimentConfig::effective_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    const int n = seed_count > 0 ? seed_count : 1;
    for (int i = 0; i < n; ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(i);
        std::uint64_t state = master_seed ^ splitmix64(s);
        out.push_back(splitmix64(state));
    }
    return out;
}

std::string ExperimentConfig::effective_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("PRICER_OUT_DIR")) return env;
    return ".";
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "algo") cfg.algorithm = val;
        else if (key == "instance") cfg.instance = val;
        else if (key == "T") cfg.horizon = std::stoll(val);
        else if (key == "delta") cfg.delta = std::stod(val);
        else if (key == "gamma") cfg.gamma = std::stod(val);
        else if (key == "v1") cfg.v1 = std::stod(val);
        else if (key == "v2") cfg.v2 = std::stod(val);
        else if (key == "sequence") cfg.sequence = val;
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "seed_count") cfg.seed_count = std::stoi(val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "full_trace") cfg.full_trace = val == "1" || val == "true";
        else if (key == "jobs") cfg.jobs = std::stoi(val);
        else if (key == "zero_demand_one") cfg.zero_demand_one = val == "1" || val == "true";
        else if (key == "seeds") {
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.seeds.push_back(std::stoull(trim(item)));
        } else {
            throw std::runtime_error("unknown config key: " + key);
        }
    }
    return cfg;
}

std::vector<double> load_sequence_file(const std::string& path, double v1, double v2) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    std::vector<double> seq;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const int idx = std::stoi(line);
        if (idx == 1) seq.push_back(v1);
        else if (idx == 2) seq.push_back(v2);
        else throw std::runtime_error("sequence index must be 1 or 2");
    }
    return seq;
}

void run_grid_ucb(SaleFeed& feed, TraceRecorder& rec, long long T, double delta) {
    const long long n = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(T))));
    std::vector<double> prices(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        prices[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
    UcbPolicy ucb(prices.size(), std::log(1.0 / delta));
    for (long long t = 0; t < T; ++t) {
        const std::size_t arm = ucb.select();
        const bool sale = feed.offer(prices[arm]);
        rec.record(prices[arm], sale ? 1.0 : 0.0);
        ucb.update(arm, prices[arm] * (sale ? 1.0 : 0.0));
    }
}

namespace {

void validate(const ExperimentConfig& cfg, const ValuationDistribution* model) {
    if (!algorithm_known(cfg.algorithm)) {
        throw std::invalid_argument("unknown algorithm: " + cfg.algorithm);
    }
    if (cfg.horizon < 2) throw std::invalid_argument("T must be at least 2");
    if (algorithm_is_adversarial(cfg.algorithm)) {
        if (!(cfg.v1 >= 0.0 && cfg.v2 >= cfg.v1 && cfg.v2 <= 1.0)) {
            throw std::invalid_argument("adversarial runs need 0 <= v1 <= v2 <= 1");
        }
        if (cfg.sequence.empty()) throw std::invalid_argument("adversarial runs need a sequence");
        return;
    }
    if (!model) throw std::invalid_argument("stochastic runs need an instance");
    if (cfg.algorithm == "cautious" && model->size() != 1) {
        throw std::invalid_argument("cautious search needs a single-valuation instance");
    }
    if (cfg.algorithm == "two-valuation" && model->size() > 2) {
        throw std::invalid_argument("two-valuation pipeline needs K <= 2");
    }
    if (cfg.algorithm == "gamma" && !(cfg.gamma > 0.0)) {
        throw std::invalid_argument("gamma pricer needs gamma > 0");
    }
}

RunResult run_single(const ExperimentConfig& cfg, const ValuationDistribution* model,
                     const std::vector<double>* sequence, std::uint64_t seed) {
    RunResult out;
    out.seed = seed;
    const long long T = cfg.horizon;
    const double delta = cfg.effective_delta();
    Rng rng = Rng::for_replication(cfg.master_seed, seed);

    if (algorithm_is_adversarial(cfg.algorithm)) {
        FullTraceRecorder full;
        AdversarialResult res = run_adversarial(cfg.v1, cfg.v2, *sequence, T, rng, full);
        out.rounds = full.rounds();
        out.final_regret = res.regret;
        out.realized_revenue = res.realized_revenue;
        // Realized regret against the horizon-level best fixed price.
        double rev_v1 = 0.0, rev_v2 = 0.0, realized = 0.0;
        long long next_geo = 1, next_dec = 100;
        const bool v2_best = [&] {
            double a = 0.0, b = 0.0;
            for (long long t = 0; t < T; ++t) {
                const double v = (*sequence)[static_cast<std::size_t>(t)];
                a += v >= cfg.v1 ? cfg.v1 : 0.0;
                b += v >= cfg.v2 ? cfg.v2 : 0.0;
            }
            return b > a;
        }();
        for (long long t = 0; t < T; ++t) {
            const double v = (*sequence)[static_cast<std::size_t>(t)];
            rev_v1 += v >= cfg.v1 ? cfg.v1 : 0.0;
            rev_v2 += v >= cfg.v2 ? cfg.v2 : 0.0;
            realized += full.trace.prices[static_cast<std::size_t>(t)] *
                        full.trace.outcomes[static_cast<std::size_t>(t)];
            const double reg = (v2_best ? rev_v2 : rev_v1) - realized;
            if (t + 1 == next_geo) {
                out.geometric_checkpoints.emplace_back(t + 1, reg);
                next_geo *= 2;
            }
            if (t + 1 == next_dec) {
                out.decade_checkpoints.emplace_back(t + 1, reg);
                next_dec *= 10;
            }
        }
        if (cfg.full_trace) out.trace = std::move(full.trace);
        return out;
    }

    const InstanceSummary info = summarize(*model);
    PseudoRegretRecorder regret(*model, info.optimal_revenue);
    FullTraceRecorder full;
    TeeRecorder tee(regret, full);
    TraceRecorder& rec = cfg.full_trace ? static_cast<TraceRecorder&>(tee)
                                        : static_cast<TraceRecorder&>(regret);

    if (cfg.algorithm == "cautious") {
        run_cautious_search(model->valuation(0), T, rec);
    } else if (cfg.algorithm == "oracle") {
        run_oracle_pricer(*model, T, rec);
    } else if (cfg.algorithm == "distribution-free") {
        StochasticBuyers env(*model, rng);
        DistributionFreeOptions opts;
        opts.demand_one_at_zero = cfg.zero_demand_one;
        run_distribution_free(env, rec, T, delta, opts);
    } else if (cfg.algorithm == "gamma") {
        StochasticBuyers env(*model, rng);
        run_gamma_pricer(env, rec, T, cfg.gamma, delta);
    } else if (cfg.algorithm == "two-valuation") {
        StochasticBuyers env(*model, rng);
        run_two_valuation(env, rec, T, delta);
    } else if (cfg.algorithm == "grid-ucb") {
        StochasticBuyers env(*model, rng);
        run_grid_ucb(env, rec, T, delta);
    }

    out.rounds = regret.rounds();
    out.final_regret = regret.cumulative_regret();
    out.realized_revenue = regret.realized_revenue();
    out.geometric_checkpoints = regret.checkpoints();
    out.decade_checkpoints = regret.decade_checkpoints();
    if (cfg.full_trace) out.trace = std::move(full.trace);
    return out;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    ExperimentSummary summary;
    summary.config = cfg;

    std::optional<ValuationDistribution> model;
    std::vector<double> sequence;
    if (algorithm_is_adversarial(cfg.algorithm)) {
        validate(cfg, nullptr);
        if (cfg.sequence == "all-v1" || cfg.sequence == "all-v2" || cfg.sequence == "alternating") {
            sequence = make_adversary_sequence(cfg.sequence, cfg.v1, cfg.v2, cfg.horizon);
        } else {
            sequence = load_sequence_file(cfg.sequence, cfg.v1, cfg.v2);
        }
        if (static_cast<long long>(sequence.size()) < cfg.horizon) {
            throw std::invalid_argument("sequence shorter than horizon");
        }
    } else {
        model = make_instance(cfg.instance);
        validate(cfg, &*model);
        summary.resolved_instance = instance_to_text(*model);
        if (cfg.algorithm == "gamma" && cfg.gamma > model->min_probability()) {
            summary.out_of_contract = true;  // guarantee void, run proceeds
        }
    }

    const std::vector<std::uint64_t> seeds = cfg.effective_seeds();
    summary.runs.resize(seeds.size());

    int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            summary.runs[i] =
                run_single(cfg, model ? &*model : nullptr, &sequence, seeds[i]);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction ordered by seed position.
    double sum = 0.0, sumsq = 0.0, maxr = 0.0;
    for (const RunResult& run : summary.runs) {
        sum += run.final_regret;
        sumsq += run.final_regret * run.final_regret;
        maxr = std::max(maxr, run.final_regret);
    }
    const double n = static_cast<double>(summary.runs.size());
    summary.mean_final_regret = sum / n;
    summary.max_final_regret = maxr;
    if (summary.runs.size() > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
        summary.stderr_final_regret = std::sqrt(var / n);
    }
    // Decade means over runs that reached each decade.
    for (std::size_t d = 0;; ++d) {
        double total = 0.0;
        std::size_t count = 0;
        long long t = 0;
        for (const RunResult& run : summary.runs) {
            if (d < run.decade_checkpoints.size()) {
                total += run.decade_checkpoints[d].second;
                t = run.decade_checkpoints[d].first;
                ++count;
            }
        }
        if (count == 0) break;
        summary.decade_means.emplace_back(t, total / static_cast<double>(count));
    }
    return summary;
}

std::string runs_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "algo,instance,T,delta,gamma,seed,rounds,final_regret,realized_revenue";
    std::size_t decades = 0;
    for (const RunResult& run : summary.runs) {
        decades = std::max(decades, run.decade_checkpoints.size());
    }
    for (std::size_t d = 0; d < decades; ++d) {
        long long t = 100;
        for (std::size_t i = 0; i < d; ++i) t *= 10;
        os << ",r_t" << t;
    }
    os << "\n";
    for (const RunResult& run : summary.runs) {
        os << summary.config.algorithm << "," << summary.config.instance << ","
           << summary.config.horizon << "," << fmt(summary.config.effective_delta()) << ","
           << fmt(summary.config.gamma) << "," << run.seed << "," << run.rounds << ","
           << fmt(run.final_regret) << "," << fmt(run.realized_revenue);
        for (std::size_t d = 0; d < decades; ++d) {
            os << ",";
            if (d < run.decade_checkpoints.size()) os << fmt(run.decade_checkpoints[d].second);
        }
        os << "\n";
    }
    return os.str();
}

std::string summary_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "metric,value\n";
    os << "runs," << summary.runs.size() << "\n";
    os << "mean_final_regret," << fmt(summary.mean_final_regret) << "\n";
    os << "stderr_final_regret," << fmt(summary.stderr_final_regret) << "\n";
    os << "max_final_regret," << fmt(summary.max_final_regret) << "\n";
    for (const auto& [t, mean] : summary.decade_means) {
        os << "mean_regret_t" << t << "," << fmt(mean) << "\n";
    }
    os << "out_of_contract," << (summary.out_of_contract ? 1 : 0) << "\n";
    return os.str();
}

std::string plot_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "series,x,y\n";
    for (const RunResult& run : summary.runs) {
        for (const auto& [t, regret] : run.geometric_checkpoints) {
            os << "seed-" << run.seed << "," << t << "," << fmt(regret) << "\n";
        }
    }
    return os.str();
}

std::string trace_csv(const RunResult& run) {
    std::ostringstream os;
    os << "t,price,outcome,revenue\n";
    for (std::size_t t = 0; t < run.trace.size(); ++t) {
        os << (t + 1) << "," << fmt(run.trace.prices[t]) << "," << fmt(run.trace.outcomes[t])
           << "," << fmt(run.trace.prices[t] * run.trace.outcomes[t]) << "\n";
    }
    return os.str();
}

void write_outputs(const ExperimentSummary& summary) {
    namespace fs = std::filesystem;
    const fs::path dir(summary.config.effective_out_dir());
    fs::create_directories(dir);
    auto write = [&](const fs::path& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    write("runs.csv", runs_csv(summary));
    write("summary.csv", summary_csv(summary));
    write("plot.csv", plot_csv(summary));
    if (summary.config.full_trace) {
        for (const RunResult& run : summary.runs) {
            write("trace_" + std::to_string(run.seed) + ".csv", trace_csv(run));
        }
    }
}

ScalingReport fit_scaling(const std::vector<ScalingPoint>& points) {
    if (points.size() < 3) throw std::invalid_argument("scaling fit needs at least 3 points");
    bool any_positive = false;
    for (const ScalingPoint& p : points) any_positive = any_positive || p.mean_regret > 0.0;
    if (!any_positive) {
        // A constant zero-regret series has slope zero by convention.
        ScalingReport flat;
        flat.points = points;
        return flat;
    }
    for (const ScalingPoint& p : points) {
        if (!(p.mean_regret > 0.0)) {
            throw std::invalid_argument("scaling fit needs positive regrets (or all zero)");
        }
    }
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const ScalingPoint& p : points) {
        sx += std::log(static_cast<double>(p.horizon));
        sy += std::log(p.mean_regret);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const ScalingPoint& p : points) {
        const double dx = std::log(static_cast<double>(p.horizon)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.mean_regret) - my);
    }
    ScalingReport out;
    out.points = points;
    out.slope = sxy / sxx;
    double ss_res = 0.0;
    for (const ScalingPoint& p : points) {
        const double x = std::log(static_cast<double>(p.horizon));
        const double fit = my + out.slope * (x - mx);
        const double r = std::log(p.mean_regret) - fit;
        ss_res += r * r;
    }
    const double se = std::sqrt(ss_res / (n - 2.0) / sxx);
    out.ci_low = out.slope - 1.96 * se;
    out.ci_high = out.slope + 1.96 * se;
    return out;
}

}  // namespace pricer
