#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "pricer/rng.hpp"
#include "pricer/valuation_model.hpp"

using namespace pricer;

TEST_SUITE_BEGIN("valuation-model");

TEST_CASE("demand evaluation on the lower-bound instances") {
    auto inst1 = gen_theorem2_instance(1);
    CHECK(inst1.demand_at(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(inst1.demand_at(0.0) == doctest::Approx(1.0).epsilon(1e-15));

    // Base family with K = 2 has support {1/2, 3/4, 1} and D(v) = 1/(2v).
    auto base = gen_lowerbound_family(2, 0, 0.0);
    CHECK(base.demand_at(0.75) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(inst1.demand_at(-0.1), std::domain_error);
    CHECK_THROWS_AS(inst1.demand_at(1.1), std::domain_error);
}

TEST_CASE("demand is non-increasing and drops by p_k exactly at valuations") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 1 + static_cast<int>(rng.next_u64() % 5);
        std::vector<double> vs, ps;
        double v = 0.0;
        for (int k = 0; k < K; ++k) {
            v += 0.02 + 0.9 * rng.uniform01() / K;
            vs.push_back(std::min(v, 1.0));
            ps.push_back(rng.uniform01() + 0.05);
        }
        double sum = 0.0;
        for (double p : ps) sum += p;
        for (double& p : ps) p /= sum;
        ValuationDistribution model(vs, ps);

        double prev = model.demand_at(0.0);
        CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
        for (int i = 1; i <= 400; ++i) {
            const double x = static_cast<double>(i) / 400.0;
            const double d = model.demand_at(x);
            CHECK(d <= prev + 1e-15);
            prev = d;
        }
        for (int k = 0; k < K; ++k) {
            const double at = model.demand_at(vs[k]);
            const double just_above = vs[k] < 1.0 ? model.demand_at(std::nextafter(vs[k], 2.0))
                                                  : 0.0;
            CHECK(at - just_above == doctest::Approx(ps[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("summarize picks the smallest optimal valuation") {
    auto inst1 = gen_theorem2_instance(1);
    auto s1 = summarize(inst1);
    CHECK(s1.optimal_price == 0.5);
    CHECK(s1.optimal_revenue == doctest::Approx(0.25).epsilon(1e-15));

    ValuationDistribution single({0.7}, {1.0});
    auto s2 = summarize(single);
    CHECK(s2.optimal_price == 0.7);
    CHECK(s2.optimal_revenue == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_FALSE(s2.min_gap_positive.has_value());

    // Instance 2 at eta = 1/8: brute-force enumeration against the closed form.
    const double eta = 0.125;
    auto inst2 = gen_theorem2_instance(2, eta);
    auto s3 = summarize(inst2);
    CHECK(s3.optimal_price == doctest::Approx((1.0 - eta) / 2.0).epsilon(1e-15));
    double best = 0.0;
    for (double vv : inst2.valuations()) best = std::max(best, vv * inst2.demand_at(vv));
    CHECK(s3.optimal_revenue == doctest::Approx(best).epsilon(1e-15));
    CHECK(s3.optimal_revenue == doctest::Approx((1.0 + eta - 2.0 * eta * eta) / 4.0).epsilon(1e-14));
    CHECK(s3.optimal_revenue == doctest::Approx(0.2734375).epsilon(1e-14));
}

TEST_CASE("optimal revenue dominates a dense price grid") {
    auto model = gen_theorem2_instance(2, 0.1);
    auto s = summarize(model);
    for (int i = 0; i <= 10000; ++i) {
        const double x = static_cast<double>(i) / 10000.0;
        CHECK(s.optimal_revenue >= x * model.demand_at(x) - 1e-12);
    }
}

TEST_CASE("ties in revenue break toward the smaller valuation") {
    ValuationDistribution flat({0.4, 0.8}, {0.5, 0.5});
    auto s = summarize(flat);
    CHECK(s.optimal_price == 0.4);  // both earn exactly 0.4
    CHECK_FALSE(s.min_gap_positive.has_value());
}

TEST_CASE("sampling: point mass, determinism, concentration") {
    ValuationDistribution point({0.5}, {1.0});
    Rng rng(42);
    CHECK(point.sample_buyer(rng) == 0.5);

    auto inst1 = gen_theorem2_instance(1);
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(inst1.sample_buyer(a) == inst1.sample_buyer(b));

    const int n = 1000000;
    Rng mc(2024);
    long long hits = 0;
    for (int i = 0; i < n; ++i) {
        if (inst1.sample_buyer(mc) == 0.5) ++hits;
    }
    const double freq = static_cast<double>(hits) / n;
    CHECK(std::fabs(freq - 0.5) < 0.002);
}

TEST_CASE("per-atom empirical error stays below 4 sqrt(0.25/n)") {
    auto model = gen_lowerbound_family(3, 2, 0.01);
    const int n = 1000000;
    Rng rng(5);
    std::vector<long long> counts(model.size(), 0);
    for (int i = 0; i < n; ++i) {
        const double v = model.sample_buyer(rng);
        for (std::size_t k = 0; k < model.size(); ++k) {
            if (model.valuation(k) == v) {
                ++counts[k];
                break;
            }
        }
    }
    const double bound = 4.0 * std::sqrt(0.25 / n);
    for (std::size_t k = 0; k < model.size(); ++k) {
        const double freq = static_cast<double>(counts[k]) / n;
        CHECK(std::fabs(freq - model.probability(k)) < bound);
    }
}

TEST_CASE("theorem-2 generator shapes") {
    auto i1 = gen_theorem2_instance(1);
    CHECK(i1.demand_at(0.0) == doctest::Approx(1.0));
    CHECK(i1.demand_at(0.5) == doctest::Approx(0.5));

    auto i2 = gen_theorem2_instance(2, 0.1);
    CHECK(i2.demand_at(0.45) == doctest::Approx(0.6).epsilon(1e-14));
    double sum = 0.0;
    for (double p : i2.probabilities()) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(gen_theorem2_instance(2, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(gen_theorem2_instance(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_theorem2_instance(3, 0.1), std::invalid_argument);
}

TEST_CASE("lower-bound family: equal revenue, endpoint mass, perturbation") {
    auto base = gen_lowerbound_family(2, 0, 0.0);
    for (double v : base.valuations()) {
        CHECK(std::fabs(v * base.demand_at(v) - 0.5) < 1e-12);
    }
    CHECK(base.probability(base.size() - 1) == doctest::Approx(0.5).epsilon(1e-15));

    // The base masses below the top point sit in [1/(4K), 1/K]; the printed
    // appendix bound 1/(2K) fails at i = K-1 where the exact value is
    // 1/(2(2K-1)).
    for (int K = 2; K <= 6; ++K) {
        auto m = gen_lowerbound_family(K, 0, 0.0);
        for (std::size_t i = 0; i + 1 < m.size(); ++i) {
            CHECK(m.probability(i) >= 1.0 / (4.0 * K) - 1e-12);
            CHECK(m.probability(i) <= 1.0 / K + 1e-12);
        }
        CHECK(m.probability(m.size() - 2) ==
              doctest::Approx(1.0 / (2.0 * (2.0 * K - 1.0))).epsilon(1e-12));
    }

    auto bumped = gen_lowerbound_family(4, 3, 0.01);
    auto s = summarize(bumped);
    CHECK(s.optimal_price == doctest::Approx(0.5 + 3.0 / 8.0).epsilon(1e-15));
    CHECK(s.optimal_revenue >= 0.5 + 0.01 - 1e-12);
    for (std::size_t k = 0; k < bumped.size(); ++k) {
        const double rev = bumped.valuation(k) * bumped.demand_at(bumped.valuation(k));
        if (bumped.valuation(k) != s.optimal_price) {
            CHECK(rev == doctest::Approx(0.5).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(gen_lowerbound_family(1, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_lowerbound_family(4, 1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(gen_lowerbound_family(4, 3, 0.2), std::invalid_argument);
}

TEST_CASE("validation rejects malformed models") {
    CHECK_THROWS_AS(ValuationDistribution({0.5, 0.4}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution({0.5}, {0.9}), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution({0.5, 0.6}, {1.0, 0.0000001}), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution({1.5}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution({}, {}), std::invalid_argument);
}

TEST_CASE("instance files round-trip") {
    auto model = gen_theorem2_instance(2, 0.1);
    const auto path = std::filesystem::temp_directory_path() / "pricer_instance_test.txt";
    save_instance(model, path.string());
    auto loaded = load_instance(path.string());
    REQUIRE(loaded.size() == model.size());
    for (std::size_t k = 0; k < model.size(); ++k) {
        CHECK(loaded.valuation(k) == model.valuation(k));
        CHECK(loaded.probability(k) == doctest::Approx(model.probability(k)).epsilon(1e-15));
    }
    std::filesystem::remove(path);

    auto named = make_instance("theorem2-2:eta=0.1");
    CHECK(named.demand_at(0.45) == doctest::Approx(0.6).epsilon(1e-14));
    auto custom = make_instance("custom:v0=0.3,p0=0.5,v1=0.8,p1=0.5");
    CHECK(custom.size() == 2);
    auto pt = make_instance("point:v=0.6");
    CHECK(pt.size() == 1);
}

TEST_SUITE_END();
