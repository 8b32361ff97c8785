#pragma once

#include <vector>

#include "pricer/bandit.hpp"
#include "pricer/rng.hpp"
#include "pricer/trace.hpp"

namespace pricer {

// Nonstochastic two-valuation pricing with known v_2: Exp3 over the pair
// {b_t, v_2} where the moving arm b_t starts at v_2 and steps down by
// T^(-1/2) whenever it is posted and rejected.  Exp3 sees reduced losses:
// a rejected moving-arm offer feeds loss zero.
class MovingArmExp3 {
public:
    MovingArmExp3(double v2, long long T);

    struct StepResult {
        double price = 0.0;
        bool sale = false;
        double true_loss = 0.0;
        double reduced_loss = 0.0;
        bool decremented = false;
    };

    // One round against the adversary's valuation V_t.
    StepResult step(double valuation, Rng& rng);

    double moving_price() const { return b_; }
    long long decrements() const { return decrements_; }

private:
    double b_;
    double v2_;
    double decrement_;
    Exp3Policy exp3_;
    long long decrements_ = 0;
};

struct AdversarialResult {
    double realized_revenue = 0.0;
    double best_fixed_revenue = 0.0;   // best of posting v1 or v2 throughout
    double regret = 0.0;               // best_fixed_revenue - realized_revenue
    long long decrements = 0;
    double final_moving_price = 0.0;
    bool floor_invariant_ok = true;    // b >= v1 - T^(-1/2) at all times
    bool freeze_invariant_ok = true;   // b never moves once b <= v1
    double reduced_loss_shortfall = 0.0;  // sum of true - reduced losses
};

// The sequence must contain only v1 and v2 and cover the horizon.
AdversarialResult run_adversarial(double v1, double v2, const std::vector<double>& sequence,
                                  long long T, Rng& rng, TraceRecorder& rec);

// Canonical adversary sequences used by the harness.
std::vector<double> make_adversary_sequence(const std::string& name, double v1, double v2,
                                            long long T);

}  // namespace pricer
