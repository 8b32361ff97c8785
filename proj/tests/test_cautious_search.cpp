#include <doctest.h>

#include <cmath>
#include <vector>

#include "pricer/cautious_search.hpp"
#include "pricer/trace.hpp"

using namespace pricer;

TEST_SUITE_BEGIN("cautious-search");

namespace {

// Worst-case width majorant from the shrink-rate analysis: two 1s, then
// 2^(2^n) copies of 2^(-2^n) for n = 0, 1, ...
double worst_case_width(long long step) {
    if (step <= 2) return 1.0;
    double consumed = 2.0;
    double width = 0.5;
    while (true) {
        const double copies = 1.0 / width;
        if (static_cast<double>(step) <= consumed + copies) return width;
        consumed += copies;
        width *= width;
    }
}

}  // namespace

TEST_CASE("posted price arithmetic") {
    SearchState fresh;
    CHECK(next_price(fresh) == 0.5);

    SearchState after_reject{0.0, 0.5, 1, 0.25, 1, 1};
    CHECK(next_price(after_reject) == 0.25);

    SearchState upper{0.5, 1.0, 1, 0.25, 0, 0};
    CHECK(next_price(upper) == 0.75);
}

TEST_CASE("observe: overshoot and exhaust branches") {
    // v = 0 rejects the first price 1/2.
    SearchState s;
    observe(s, false);
    CHECK(s.a == 0.0);
    CHECK(s.b == 0.5);
    CHECK(s.eps == 0.25);
    CHECK(s.n == 1);
    CHECK(s.overshoots == 1);

    // v = 1 accepts 1/2 but 1/2 + 1/2 is not < 1: interval shrinks right.
    SearchState t;
    observe(t, true);
    CHECK(t.a == 0.5);
    CHECK(t.b == 1.0);
    CHECK(t.eps == 0.25);
    CHECK(t.n == 1);
    CHECK(t.overshoots == 0);
}

TEST_CASE("width never exceeds the worst-case schedule or 2/m") {
    for (int vi = 0; vi <= 10; ++vi) {
        const double v = static_cast<double>(vi) / 10.0;
        SearchState s;
        for (long long m = 1; m <= 100000; ++m) {
            observe(s, next_price(s) <= v);
            CHECK(s.b - s.a <= 2.0 / static_cast<double>(m));
            CHECK(s.b - s.a <= worst_case_width(m + 1) + 1e-15);
            // Containment is exact until eps squares below one ulp of a,
            // far past any 1/T pinning width; allow that sub-ulp drift.
            if (v > 0.0) {
                CHECK(s.a <= v + 1e-12);
                CHECK(v <= s.b + 1e-12);
            } else {
                CHECK(s.a == 0.0);
            }
        }
    }
}

TEST_CASE("step size follows 2^(-2^s)") {
    SearchState s;
    double expect = 0.5;
    int shrinks = 0;
    // Feed v = 0.3; every shrink squares eps.
    for (int m = 0; m < 2000 && shrinks < 5; ++m) {
        const double before = s.eps;
        observe(s, next_price(s) <= 0.3);
        if (s.eps != before) {
            expect *= expect;
            ++shrinks;
            CHECK(s.eps == expect);
        }
    }
    CHECK(shrinks == 5);
}

TEST_CASE("regret of a full run stays within 3 ln ln T + 8") {
    for (long long T : {1000LL, 10000LL}) {
        for (int vi = 0; vi <= 20; ++vi) {
            const double v = static_cast<double>(vi) / 20.0;
            FullTraceRecorder rec;
            run_cautious_search(v, T, rec);
            REQUIRE(rec.trace.size() == static_cast<std::size_t>(T));
            double regret = 0.0;
            for (std::size_t t = 0; t < rec.trace.size(); ++t) {
                regret += v - rec.trace.prices[t] * rec.trace.outcomes[t];
            }
            const double budget = 3.0 * std::log(std::log(static_cast<double>(T))) + 8.0;
            CHECK(regret <= budget);
        }
    }
}

TEST_CASE("v = 1, T = 100 regret is below 3 ln ln 100 + 8") {
    FullTraceRecorder rec;
    run_cautious_search(1.0, 100, rec);
    double regret = 0.0;
    for (std::size_t t = 0; t < rec.trace.size(); ++t) {
        regret += 1.0 - rec.trace.prices[t] * rec.trace.outcomes[t];
    }
    CHECK(regret <= 3.0 * std::log(std::log(100.0)) + 8.0);  // about 12.58
}

TEST_CASE("overshoot count stays below log2 log2 T + 2") {
    for (long long T : {1000LL, 100000LL}) {
        const double cap = std::log2(std::log2(static_cast<double>(T))) + 2.0;
        for (int vi = 0; vi <= 20; ++vi) {
            const double v = static_cast<double>(vi) / 20.0;
            SearchState s;
            const double floor = 1.0 / static_cast<double>(T);
            for (long long t = 0; t < T && s.b - s.a >= floor; ++t) {
                observe(s, next_price(s) <= v);
            }
            CHECK(static_cast<double>(s.overshoots) <= cap);
        }
    }
}

TEST_CASE("v = 0 earns nothing each round") {
    // Active-search prices a + n*eps are all strictly positive and rejected;
    // once the width drops below 1/T the pinned left endpoint is 0, which
    // sells for revenue zero.  Either way no revenue is collected.
    FullTraceRecorder rec;
    run_cautious_search(0.0, 10, rec);
    bool pinned = false;
    for (std::size_t t = 0; t < rec.trace.size(); ++t) {
        CHECK(rec.trace.prices[t] * rec.trace.outcomes[t] == 0.0);
        if (rec.trace.prices[t] == 0.0) pinned = true;
        if (!pinned) CHECK(rec.trace.prices[t] > 0.0);
    }
    CHECK(pinned);  // T = 10 shrinks below width 0.1 within three steps
}

TEST_CASE("after the interval collapses the left endpoint is posted") {
    const long long T = 1000;
    FullTraceRecorder rec;
    run_cautious_search(0.37, T, rec);
    // Find the tail where prices repeat and check they all equal the same
    // endpoint at or below v.
    const double last = rec.trace.prices.back();
    CHECK(last <= 0.37);
    CHECK(0.37 - last <= 1.0 / static_cast<double>(T));
    std::size_t tail = rec.trace.size() - 1;
    while (tail > 0 && rec.trace.prices[tail - 1] == last) --tail;
    CHECK(tail < rec.trace.size() - 100);  // a long pinned stretch exists
}

TEST_SUITE_END();
