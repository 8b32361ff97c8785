#include "pricer/cautious_search.hpp"

#include <stdexcept>

namespace pricer {

void run_cautious_search(double v, long long T, TraceRecorder& rec) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("v must lie in [0,1]");
    if (T < 1) throw std::invalid_argument("T must be at least 1");
    SearchState s;
    const double width_floor = 1.0 / static_cast<double>(T);
    for (long long t = 0; t < T; ++t) {
        if (s.b - s.a < width_floor) {
            rec.record(s.a, s.a <= v ? 1.0 : 0.0);
            continue;
        }
        const double x = next_price(s);
        const bool accepted = x <= v;
        rec.record(x, accepted ? 1.0 : 0.0);
        observe(s, accepted);
    }
}

}  // namespace pricer
