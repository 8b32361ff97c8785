#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pricer/valuation_model.hpp"

namespace pricer {

struct TraceMeta {
    std::string algorithm;
    std::string instance;
    std::uint64_t seed = 0;
    long long horizon = 0;
    double delta = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
};

// Per-round record of a run: posted price and the observed outcome (sale
// indicator for binary feedback, demand value for the oracle channel).
// Instantaneous revenue is price * outcome in both regimes.
struct RegretTrace {
    TraceMeta meta;
    std::vector<double> prices;
    std::vector<double> outcomes;

    std::size_t size() const { return prices.size(); }
};

// Cumulative pseudo-regret sum_t (v* D(v*) - X_t D(X_t)) against the model,
// which only the harness knows.
std::vector<double> compute_pseudo_regret(const RegretTrace& trace,
                                          const ValuationDistribution& model);

// Recording strategies.  Long runs use the pseudo-regret recorder, which
// keeps only cumulative regret plus geometric / per-decade checkpoints.
class TraceRecorder {
public:
    virtual ~TraceRecorder() = default;
    virtual void record(double price, double outcome) = 0;
    virtual long long rounds() const = 0;
};

class NullRecorder final : public TraceRecorder {
public:
    void record(double, double) override { ++t_; }
    long long rounds() const override { return t_; }

private:
    long long t_ = 0;
};

class FullTraceRecorder final : public TraceRecorder {
public:
    void record(double price, double outcome) override {
        trace.prices.push_back(price);
        trace.outcomes.push_back(outcome);
    }
    long long rounds() const override { return static_cast<long long>(trace.prices.size()); }

    RegretTrace trace;
};

class PseudoRegretRecorder final : public TraceRecorder {
public:
    PseudoRegretRecorder(const ValuationDistribution& model, double optimal_revenue)
        : model_(&model), rstar_(optimal_revenue) {}

    void record(double price, double outcome) override {
        realized_ += price * outcome;
        ++t_;
        cumulative_ += rstar_ - price * model_->demand_at(price);
        if (t_ == next_geometric_) {
            checkpoints_.emplace_back(t_, cumulative_);
            next_geometric_ *= 2;
        }
        if (t_ == next_decade_) {
            decade_checkpoints_.emplace_back(t_, cumulative_);
            next_decade_ *= 10;
        }
    }

    long long rounds() const override { return t_; }
    double cumulative_regret() const { return cumulative_; }
    double realized_revenue() const { return realized_; }
    // Geometric (t = 1, 2, 4, ...) checkpoints of cumulative pseudo-regret.
    const std::vector<std::pair<long long, double>>& checkpoints() const { return checkpoints_; }
    // Per-decade (t = 100, 1000, ...) checkpoints.
    const std::vector<std::pair<long long, double>>& decade_checkpoints() const {
        return decade_checkpoints_;
    }

private:
    const ValuationDistribution* model_;
    double rstar_;
    long long t_ = 0;
    double cumulative_ = 0.0;
    double realized_ = 0.0;
    long long next_geometric_ = 1;
    long long next_decade_ = 100;
    std::vector<std::pair<long long, double>> checkpoints_;
    std::vector<std::pair<long long, double>> decade_checkpoints_;
};

class TeeRecorder final : public TraceRecorder {
public:
    TeeRecorder(TraceRecorder& first, TraceRecorder& second) : first_(&first), second_(&second) {}

    void record(double price, double outcome) override {
        first_->record(price, outcome);
        second_->record(price, outcome);
    }
    long long rounds() const override { return first_->rounds(); }

private:
    TraceRecorder* first_;
    TraceRecorder* second_;
};

}  // namespace pricer
