#pragma once

#include "pricer/rng.hpp"
#include "pricer/valuation_model.hpp"

namespace pricer {

// The two feedback channels of the protocol.  Pricing algorithms only ever
// see these interfaces; the hidden distribution stays on the harness side.
class SaleFeed {
public:
    virtual ~SaleFeed() = default;
    // Posts a take-it-or-leave-it price, returns the accept/reject bit.
    virtual bool offer(double price) = 0;
};

class DemandOracle {
public:
    virtual ~DemandOracle() = default;
    // Exact-demand feedback D(price).
    virtual double demand(double price) = 0;
};

class StochasticBuyers final : public SaleFeed {
public:
    StochasticBuyers(const ValuationDistribution& model, Rng rng)
        : model_(model), rng_(rng) {}

    bool offer(double price) override {
        ++offers_;
        return model_.sample_buyer(rng_) >= price;
    }

    long long offers_made() const { return offers_; }

private:
    ValuationDistribution model_;
    Rng rng_;
    long long offers_ = 0;
};

class ExactDemandOracle final : public DemandOracle {
public:
    explicit ExactDemandOracle(const ValuationDistribution& model) : model_(model) {}
    double demand(double price) override { return model_.demand_at(price); }

private:
    ValuationDistribution model_;
};

}  // namespace pricer
