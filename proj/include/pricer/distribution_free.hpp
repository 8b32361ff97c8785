#pragma once

#include <map>
#include <vector>

#include "pricer/environment.hpp"
#include "pricer/trace.hpp"

namespace pricer {

struct DistributionFreeOptions {
    // The printed initialization pins the demand estimate at price zero to 0,
    // which makes the very first comparison read as an undershoot no matter
    // what.  Setting this flag stores 1 instead (the true demand at price 0),
    // which lets the first macrostep detect structure below the midpoint.
    bool demand_one_at_zero = false;
};

struct SearchArm {
    double a;
    double b;
    bool active;
};

// Search phase of the distribution-free pricer: macrostep binary search that
// localizes every relevant valuation (p_i >= (K/T)^(1/4)) into an interval
// of width <= T^(-1/2).  Each macrostep offers the midpoint of the lowest-
// index active arm wider than T^(-1/2) for ceil(8 sqrt(T/k) ln(1/delta))
// rounds.  Demand estimates are kept per exact price (all posted prices are
// dyadic); an arm's right endpoint is measured lazily the first time a
// comparison needs it.
class SearchPhase {
public:
    SearchPhase(long long T, double log_conf, DistributionFreeOptions opts = {});

    // Runs one macrostep; returns false once every active arm has width
    // <= T^(-1/2) (the phase's own termination) or the budget cannot cover a
    // single round.  budget is decremented by rounds actually spent.
    bool step(SaleFeed& feed, TraceRecorder& rec, long long* budget);

    bool done() const;
    long long macrosteps() const { return macrosteps_; }
    long long allocations() const { return k_; }  // k_m
    const std::vector<SearchArm>& arms() const { return arms_; }
    const std::map<double, double>& demand_estimates() const { return dbar_; }
    std::vector<double> surviving_left_endpoints() const;
    long long macrostep_length() const;           // for the current k_m
    double detection_threshold() const;           // (k_m/T)^(1/4) / 2

private:
    double measure(SaleFeed& feed, TraceRecorder& rec, double price, long long* budget,
                   bool* truncated);
    bool spawn_test(double x, double dbar_x, std::size_t current) const;

    long long T_;
    double log_conf_;
    DistributionFreeOptions opts_;
    double width_floor_;  // T^(-1/2)
    std::vector<SearchArm> arms_;
    long long k_ = 1;
    long long macrosteps_ = 0;
    std::map<double, double> dbar_;
};

// Full run: search phase truncated at the horizon, then UCB1 over the
// surviving left endpoints for the remaining rounds.
void run_distribution_free(SaleFeed& feed, TraceRecorder& rec, long long T, double delta,
                           DistributionFreeOptions opts = {});

}  // namespace pricer
