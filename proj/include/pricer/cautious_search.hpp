#pragma once

#include "pricer/trace.hpp"

namespace pricer {

// Deterministic cautious search for a single fixed valuation with binary
// feedback.  Prices a + n*eps are posted until one overshoots (rejection) or
// steps out of [a, b]; either event shrinks the interval and squares the
// step size, so eps is 2^(-2^s) after s shrink events.
struct SearchState {
    double a = 0.0;
    double b = 1.0;
    long long n = 1;
    double eps = 0.5;
    long long steps_taken = 0;
    int overshoots = 0;
};

inline double next_price(const SearchState& s) { return s.a + static_cast<double>(s.n) * s.eps; }

// Feedback convention: accepted <=> X <= v, boundary counts as accepted.
inline void observe(SearchState& s, bool accepted) {
    const double x = next_price(s);
    if (accepted) {
        if (x + s.eps < s.b) {
            ++s.n;
        } else {
            s.a = x;
            s.n = 1;
            s.eps *= s.eps;
        }
    } else {
        s.a = x - s.eps;
        s.b = x;
        s.n = 1;
        s.eps *= s.eps;
        ++s.overshoots;
    }
    ++s.steps_taken;
}

// Full run with noiseless feedback 1{X <= v}.  Once b - a < 1/T the left
// endpoint is posted for all remaining rounds.
void run_cautious_search(double v, long long T, TraceRecorder& rec);

}  // namespace pricer
