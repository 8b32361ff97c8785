#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pricer/bandit.hpp"
#include "pricer/rng.hpp"

using namespace pricer;

TEST_SUITE_BEGIN("bandit-core");

TEST_CASE("ucb index arithmetic") {
    UcbPolicy plain(2, 1.0);
    CHECK(plain.index(0) == std::numeric_limits<double>::infinity());

    // alpha = 0, s = 4, ln(1/delta) = 1: mean + 1/2.
    UcbPolicy p2(1, 1.0);
    for (int i = 0; i < 4; ++i) p2.update(0, 0.0);
    CHECK(p2.index(0) == doctest::Approx(0.5).epsilon(1e-15));

    // alpha = 16, gamma = 0.5, s = 4: 16/(0.25*4) + 0.5 = 16.5.
    UcbPolicy p3(1, 1.0);
    p3.set_inflation(0, 16.0, 0.5);
    for (int i = 0; i < 4; ++i) p3.update(0, 0.0);
    CHECK(p3.index(0) == doctest::Approx(16.5).epsilon(1e-15));
}

TEST_CASE("ucb selection and ties") {
    UcbPolicy fresh(2, 1.0);
    CHECK(fresh.select() == 0);  // both infinite, lowest index wins

    UcbPolicy p(2, 1.0);
    for (int i = 0; i < 100; ++i) {
        p.update(0, 0.9);
        p.update(1, 0.1);
    }
    CHECK(p.select() == 0);  // 0.9 + 0.1 beats 0.1 + 0.1
}

TEST_CASE("ucb index decreases in the pull count") {
    UcbPolicy p(1, 2.0);
    p.set_inflation(0, 4.0, 0.5);
    p.update(0, 0.5);
    double prev = p.index(0);
    for (int s = 2; s <= 200; ++s) {
        p.update(0, 0.5);
        const double now = p.index(0);
        CHECK(now < prev);
        prev = now;
    }
}

TEST_CASE("ucb suboptimal pulls on a 0.9 vs 0.1 bernoulli pair") {
    const long long T = 10000;
    const double log_conf = 2.0 * std::log(static_cast<double>(T));  // delta = T^-2
    long long total_subopt = 0;
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(900 + seed);
        UcbPolicy p(2, log_conf);
        long long subopt = 0;
        for (long long t = 0; t < T; ++t) {
            const std::size_t arm = p.select();
            const double mean = arm == 0 ? 0.9 : 0.1;
            p.update(arm, rng.bernoulli(mean) ? 1.0 : 0.0);
            if (arm == 1) ++subopt;
        }
        total_subopt += subopt;
    }
    CHECK(static_cast<double>(total_subopt) / 50.0 <= 300.0);
}

TEST_CASE("exp3 starts uniform and ignores zero loss") {
    Exp3Policy exp3(2, Exp3Policy::horizon_rate(2, 10000));
    auto p = exp3.probabilities();
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

    exp3.update(0, 0.0);
    p = exp3.probabilities();
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(exp3.update(0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(exp3.update(0, -0.1), std::invalid_argument);
}

TEST_CASE("exp3 probabilities always form a distribution") {
    Rng rng(11);
    Exp3Policy exp3(3, 0.05);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t arm = exp3.sample(rng);
        exp3.update(arm, rng.uniform01());
        auto p = exp3.probabilities();
        double sum = 0.0;
        for (double x : p) {
            CHECK(x > 0.0);
            sum += x;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("exp3 regret against a 1-vs-0 loss gap") {
    const long long T = 10000;
    double total_regret = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(7000 + seed);
        Exp3Policy exp3(2, Exp3Policy::horizon_rate(2, T));
        double loss = 0.0;
        for (long long t = 0; t < T; ++t) {
            const std::size_t arm = exp3.sample(rng);
            const double l = arm == 0 ? 1.0 : 0.0;
            loss += l;
            exp3.update(arm, l);
        }
        total_regret += loss;  // best arm (1) has zero loss
    }
    CHECK(total_regret / 50.0 <= std::sqrt(4.0 * T * std::log(2.0)));
}

TEST_SUITE_END();
