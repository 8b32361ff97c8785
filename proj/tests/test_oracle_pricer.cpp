#include <doctest.h>

#include <cmath>
#include <vector>

#include "pricer/cautious_search.hpp"
#include "pricer/oracle_pricer.hpp"
#include "pricer/rng.hpp"
#include "pricer/trace.hpp"
#include "pricer/valuation_model.hpp"

using namespace pricer;

TEST_SUITE_BEGIN("oracle-pricer");

namespace {

double trace_regret(const RegretTrace& trace, const ValuationDistribution& model) {
    const auto info = summarize(model);
    double regret = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        regret += info.optimal_revenue - trace.prices[t] * model.demand_at(trace.prices[t]);
    }
    return regret;
}

ValuationDistribution random_model(Rng& rng, int K, double min_spacing) {
    while (true) {
        std::vector<double> vs;
        for (int k = 0; k < K; ++k) vs.push_back(0.05 + 0.9 * rng.uniform01());
        std::sort(vs.begin(), vs.end());
        bool ok = true;
        for (int k = 1; k < K; ++k) ok = ok && vs[k] - vs[k - 1] >= min_spacing;
        if (!ok) continue;
        std::vector<double> ps;
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            ps.push_back(0.1 + rng.uniform01());
            sum += ps.back();
        }
        for (double& p : ps) p /= sum;
        return ValuationDistribution(vs, ps);
    }
}

}  // namespace

TEST_CASE("first step posts one half and a new demand value spawns an arm") {
    ValuationDistribution model({0.3, 0.8}, {0.5, 0.5});
    ExactDemandOracle oracle(model);
    OraclePricerState state;

    const double x = oracle_step(state, 1000, oracle);
    CHECK(x == 0.5);
    // D(1/2) = 0.5 differs from D_1 = 1 and from 0: an arm [0.5, 1] appears
    // and the original shrinks to [0, 0.5] with eps 1/4.
    REQUIRE(state.arms.size() == 2);
    CHECK(state.arms[1].a == 0.5);
    CHECK(state.arms[1].b == 1.0);
    CHECK(state.arms[1].eps == 0.5);
    CHECK(state.arms[1].demand == doctest::Approx(0.5));
    CHECK(state.arms[0].a == 0.0);
    CHECK(state.arms[0].b == 0.5);
    CHECK(state.arms[0].eps == 0.25);
}

TEST_CASE("known demand value shrinks without spawning") {
    // Single valuation: every price <= v sees demand 1, every price above 0.
    ValuationDistribution model({0.6}, {1.0});
    ExactDemandOracle oracle(model);
    OraclePricerState state;
    for (int t = 0; t < 50; ++t) oracle_step(state, 1000, oracle);
    CHECK(state.arms.size() == 1);  // demand only ever hits {1, 0}
}

TEST_CASE("single valuation run matches the cautious search step for step") {
    for (double v : {0.6, 1.0}) {
        const long long T = 200;
        ValuationDistribution model({v}, {1.0});
        FullTraceRecorder oracle_rec;
        run_oracle_pricer(model, T, oracle_rec);

        // Raw cautious search driven by the sale indicator at the same price.
        SearchState s;
        const double floor = 1.0 / static_cast<double>(T);
        for (long long t = 0; t < T; ++t) {
            double expected;
            if (s.b - s.a <= floor) {
                expected = s.a;
            } else {
                expected = next_price(s);
                observe(s, expected <= v);
            }
            CHECK(oracle_rec.trace.prices[static_cast<std::size_t>(t)] ==
                  doctest::Approx(expected).epsilon(1e-15));
        }
    }
}

TEST_CASE("theorem-4 regret bound holds on the spec instances") {
    {
        const long long T = 10000;
        ValuationDistribution model({0.6}, {1.0});
        FullTraceRecorder rec;
        run_oracle_pricer(model, T, rec);
        CHECK(trace_regret(rec.trace, model) <=
              1.0 * (3.0 * std::log(std::log(static_cast<double>(T))) + 10.0));
    }
    {
        const long long T = 100000;
        Rng rng(31);
        auto model = random_model(rng, 3, 1e-4);
        FullTraceRecorder rec;
        run_oracle_pricer(model, T, rec);
        CHECK(trace_regret(rec.trace, model) <=
              3.0 * (3.0 * std::log(std::log(static_cast<double>(T))) + 10.0));
    }
}

TEST_CASE("v = 1 short run equals the cautious trace") {
    ValuationDistribution model({1.0}, {1.0});
    FullTraceRecorder rec;
    run_oracle_pricer(model, 10, rec);
    FullTraceRecorder cautious;
    run_cautious_search(1.0, 10, cautious);
    REQUIRE(rec.trace.size() == cautious.trace.size());
    for (std::size_t t = 0; t < rec.trace.size(); ++t) {
        CHECK(rec.trace.prices[t] == cautious.trace.prices[t]);
    }
}

TEST_CASE("every valuation lies in exactly one live interval") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int K = 2 + static_cast<int>(rng.next_u64() % 3);
        auto model = random_model(rng, K, 1e-3);
        ExactDemandOracle oracle(model);
        OraclePricerState state;
        for (int t = 0; t < 2000; ++t) {
            oracle_step(state, 10000, oracle);
            if (t % 100 != 0) continue;
            for (double v : model.valuations()) {
                int containing = 0;
                for (const auto& arm : state.arms) {
                    if (arm.a <= v && v <= arm.b) ++containing;
                }
                CHECK(containing >= 1);
            }
        }
    }
}

// Replay check: the subsequence of prices offered while v_k sits in the
// selected (unpinned) interval equals a standalone cautious search for v_k.
TEST_CASE("equivalence of per-valuation subsequences with standalone searches") {
    Rng rng(123);
    const long long T = 10000;
    for (int trial = 0; trial < 50; ++trial) {
        const int K = 1 + static_cast<int>(rng.next_u64() % 4);
        auto model = random_model(rng, K, 1.0 / static_cast<double>(T));
        ExactDemandOracle oracle(model);
        OraclePricerState state;
        std::vector<SearchState> shadows(model.size());
        for (long long t = 0; t < T; ++t) {
            const std::size_t pick = state.greedy_pick();
            const OracleArm chosen = state.arms[pick];
            const bool pinned = chosen.b - chosen.a <= 1.0 / static_cast<double>(T);
            const double x = oracle_step(state, T, oracle);
            if (pinned) continue;
            for (std::size_t k = 0; k < model.size(); ++k) {
                const double v = model.valuation(k);
                if (chosen.a <= v && v <= chosen.b) {
                    CHECK(next_price(shadows[k]) == doctest::Approx(x).epsilon(1e-15));
                    observe(shadows[k], x <= v);
                }
            }
        }
    }
}

TEST_SUITE_END();
