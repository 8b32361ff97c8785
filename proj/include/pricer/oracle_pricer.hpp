#pragma once

#include <cstddef>
#include <vector>

#include "pricer/environment.hpp"
#include "pricer/trace.hpp"

namespace pricer {

// Multi-interval cautious search with exact-demand feedback.  Each arm is an
// interval [a, b] whose recorded demand equals the true demand at its left
// anchor; the greedy pick maximizes b_i * D_i.
struct OracleArm {
    double a = 0.0;
    double b = 1.0;
    long long n = 1;
    double eps = 0.5;
    double demand = 1.0;  // D_i
};

struct OraclePricerState {
    std::vector<OracleArm> arms{OracleArm{}};

    std::size_t greedy_pick() const;  // argmax b_i * D_i, ties to lowest index
};

// Demand values are exact reals in theory, floats in practice.
inline constexpr double kDemandEqualityTol = 1e-9;

// One round: posts a price, applies the three-way update, returns the price.
double oracle_step(OraclePricerState& state, long long horizon, DemandOracle& oracle);

// Deterministic full run; the trace records (price, demand) per round.
void run_oracle_pricer(const ValuationDistribution& model, long long T, TraceRecorder& rec);

}  // namespace pricer
