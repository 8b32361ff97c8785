#include "pricer/oracle_pricer.hpp"

#include <cmath>
#include <stdexcept>

namespace pricer {

std::size_t OraclePricerState::greedy_pick() const {
    std::size_t best = 0;
    double best_score = arms[0].b * arms[0].demand;
    for (std::size_t i = 1; i < arms.size(); ++i) {
        const double score = arms[i].b * arms[i].demand;
        if (score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

double oracle_step(OraclePricerState& state, long long horizon, DemandOracle& oracle) {
    const std::size_t i = state.greedy_pick();
    OracleArm& arm = state.arms[i];
    if (arm.b - arm.a <= 1.0 / static_cast<double>(horizon)) {
        return arm.a;  // interval is tiny, play the left endpoint for good
    }
    const double x = arm.a + static_cast<double>(arm.n) * arm.eps;
    const double d = oracle.demand(x);
    if (!(d >= 0.0 && d <= 1.0)) throw std::runtime_error("oracle demand outside [0,1]");

    if (std::fabs(d - arm.demand) <= kDemandEqualityTol) {
        if (x + arm.eps < arm.b) {
            ++arm.n;
        } else {
            arm.a = x;
            arm.n = 1;
            arm.eps *= arm.eps;
        }
        return x;
    }

    bool known = std::fabs(d) <= kDemandEqualityTol;  // demand value 0 spawns nothing
    for (const OracleArm& other : state.arms) {
        if (std::fabs(d - other.demand) <= kDemandEqualityTol) {
            known = true;
            break;
        }
    }
    if (!known) {
        // A new valuation is found: allocate [x, b] with the inherited step.
        state.arms.push_back(OracleArm{x, arm.b, 1, arm.eps, d});
    }
    OracleArm& shrink = state.arms[i];  // push_back may move the vector
    shrink.a = x - shrink.eps;
    shrink.b = x;
    shrink.n = 1;
    shrink.eps *= shrink.eps;
    return x;
}

void run_oracle_pricer(const ValuationDistribution& model, long long T, TraceRecorder& rec) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
    ExactDemandOracle oracle(model);
    OraclePricerState state;
    for (long long t = 0; t < T; ++t) {
        const double x = oracle_step(state, T, oracle);
        rec.record(x, model.demand_at(x));
    }
}

}  // namespace pricer
