#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "pricer/environment.hpp"
#include "pricer/trace.hpp"

namespace pricer {

// Macrostep-level feedback: the mean acceptance rate over a block of offers
// of one price.  The sampling implementation drives a SaleFeed and records
// every round; the exact implementation backs the error-free replay used to
// check that the interval trajectories match the exact-demand pricer.
class MacroFeed {
public:
    virtual ~MacroFeed() = default;
    virtual double offer_block(double price, long long rounds) = 0;
};

class SamplingMacroFeed final : public MacroFeed {
public:
    SamplingMacroFeed(SaleFeed& feed, TraceRecorder& rec) : feed_(&feed), rec_(&rec) {}

    double offer_block(double price, long long rounds) override {
        long long accepted = 0;
        for (long long r = 0; r < rounds; ++r) {
            const bool sale = feed_->offer(price);
            rec_->record(price, sale ? 1.0 : 0.0);
            if (sale) ++accepted;
        }
        return static_cast<double>(accepted) / static_cast<double>(rounds);
    }

private:
    SaleFeed* feed_;
    TraceRecorder* rec_;
};

class ExactMacroFeed final : public MacroFeed {
public:
    explicit ExactMacroFeed(const ValuationDistribution& model) : model_(&model) {}
    double offer_block(double price, long long) override { return model_->demand_at(price); }

private:
    const ValuationDistribution* model_;
};

// Stochastic K-valuation pricer given a lower bound gamma on the smallest
// demand drop.  Runs cautious searches over intervals in macrosteps of
// B = ceil(8 ln(1/delta)/gamma^2) rounds, selecting the arm maximizing
// b_i * Dhat(i) + sqrt(ln(1/delta)/N(i)).  Macrosteps that end in the
// overshoot shrink are discarded from the retained statistics, so
// N(i) = B * (picks(i) - overshoots(i)) holds at every step.
class GammaPricer {
public:
    GammaPricer(long long T, double gamma, double delta);

    struct Arm {
        double a = 0.0;
        double b = 1.0;
        long long n = 1;
        double eps = 0.5;
        long long retained_blocks = 0;
        double retained_mean_sum = 0.0;
        long long picks = 0;
        long long overshoot_picks = 0;
    };

    long long block_length() const { return block_len_; }
    long long max_macrosteps() const { return max_macrosteps_; }  // M_gamma
    double log_conf() const { return log_conf_; }

    double dhat(std::size_t i) const;
    long long retained_rounds(std::size_t i) const;  // N(i)
    double score(std::size_t i) const;               // b_i U_i
    std::size_t select() const;

    // One macrostep against the feed; returns rounds spent.  A truncated
    // macrostep posts its price but performs no comparison or update.
    long long macrostep(MacroFeed& feed, long long max_rounds);

    const std::vector<Arm>& arms() const { return arms_; }
    const std::map<double, double>& demand_estimates() const { return dbar_; }

private:
    bool spawn_test(double x, double dbar_x, std::size_t current) const;

    long long T_;
    double gamma_;
    double log_conf_;
    long long block_len_;
    long long max_macrosteps_;
    std::vector<Arm> arms_;
    std::map<double, double> dbar_;
};

void run_gamma_pricer(SaleFeed& feed, TraceRecorder& rec, long long T, double gamma, double delta);

}  // namespace pricer
