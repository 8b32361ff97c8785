#include "pricer/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pricer {

MovingArmExp3::MovingArmExp3(double v2, long long T)
    : b_(v2),
      v2_(v2),
      decrement_(1.0 / std::sqrt(static_cast<double>(T))),
      exp3_(2, Exp3Policy::horizon_rate(2, T)) {
    if (!(v2 >= 0.0 && v2 <= 1.0)) throw std::invalid_argument("v2 must lie in [0,1]");
    if (T < 1) throw std::invalid_argument("T must be at least 1");
}

MovingArmExp3::StepResult MovingArmExp3::step(double valuation, Rng& rng) {
    StepResult res;
    const std::size_t arm = exp3_.sample(rng);
    res.price = arm == 0 ? b_ : v2_;
    res.sale = valuation >= res.price;
    res.true_loss = 1.0 - res.price * (res.sale ? 1.0 : 0.0);
    // Reduced loss: a rejected moving-arm offer is fed as zero.
    res.reduced_loss = (arm == 0 && !res.sale) ? 0.0 : res.true_loss;
    exp3_.update(arm, res.reduced_loss);
    if (arm == 0 && !res.sale) {
        b_ = std::max(0.0, b_ - decrement_);
        ++decrements_;
        res.decremented = true;
    }
    return res;
}

AdversarialResult run_adversarial(double v1, double v2, const std::vector<double>& sequence,
                                  long long T, Rng& rng, TraceRecorder& rec) {
    if (!(v1 >= 0.0 && v1 <= v2 && v2 <= 1.0)) {
        throw std::invalid_argument("need 0 <= v1 <= v2 <= 1");
    }
    if (static_cast<long long>(sequence.size()) < T) {
        throw std::invalid_argument("sequence shorter than horizon");
    }
    for (double v : sequence) {
        if (v != v1 && v != v2) throw std::invalid_argument("sequence element outside {v1, v2}");
    }

    MovingArmExp3 pricer(v2, T);
    AdversarialResult out;
    const double floor = v1 - 1.0 / std::sqrt(static_cast<double>(T));
    double rev_v1 = 0.0;
    double rev_v2 = 0.0;
    bool frozen_checked = true;
    double frozen_at = -1.0;
    for (long long t = 0; t < T; ++t) {
        const double v = sequence[static_cast<std::size_t>(t)];
        const auto res = pricer.step(v, rng);
        rec.record(res.price, res.sale ? 1.0 : 0.0);
        out.realized_revenue += res.price * (res.sale ? 1.0 : 0.0);
        out.reduced_loss_shortfall += res.true_loss - res.reduced_loss;
        rev_v1 += v >= v1 ? v1 : 0.0;
        rev_v2 += v >= v2 ? v2 : 0.0;
        if (pricer.moving_price() < floor) out.floor_invariant_ok = false;
        if (frozen_at >= 0.0 && pricer.moving_price() != frozen_at) frozen_checked = false;
        if (frozen_at < 0.0 && pricer.moving_price() <= v1) frozen_at = pricer.moving_price();
    }
    out.freeze_invariant_ok = frozen_checked;
    out.decrements = pricer.decrements();
    out.final_moving_price = pricer.moving_price();
    out.best_fixed_revenue = std::max(rev_v1, rev_v2);
    out.regret = out.best_fixed_revenue - out.realized_revenue;
    return out;
}

std::vector<double> make_adversary_sequence(const std::string& name, double v1, double v2,
                                            long long T) {
    std::vector<double> seq(static_cast<std::size_t>(T));
    if (name == "all-v1") {
        std::fill(seq.begin(), seq.end(), v1);
    } else if (name == "all-v2") {
        std::fill(seq.begin(), seq.end(), v2);
    } else if (name == "alternating") {
        for (long long t = 0; t < T; ++t) seq[static_cast<std::size_t>(t)] = (t % 2 == 0) ? v1 : v2;
    } else {
        throw std::invalid_argument("unknown adversary sequence: " + name);
    }
    return seq;
}

}  // namespace pricer
