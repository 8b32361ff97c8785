#pragma once

#include <cstddef>
#include <limits>

#include "pricer/environment.hpp"
#include "pricer/gamma_pricer.hpp"
#include "pricer/noisy_search.hpp"
#include "pricer/trace.hpp"

namespace pricer {

// 2-UCB: the gamma pricer specialized to two known valuations.  Arm i
// targets v_i with its own lower bound gamma_i and macrostep length
// ceil(8 ln(1/delta)/-ln(1-gamma_i)); the spawn test is skipped.  Macrostep
// success follows the noisy-cautious-search conventions: the v_1 arm fails
// on any rejection, the v_2 arm fails when nothing is accepted.
class TwoUcb {
public:
    TwoUcb(long long T, double gamma1, double gamma2, double delta);

    struct Arm {
        double a = 0.0;
        double b = 1.0;
        long long n = 1;
        double eps = 0.5;
        long long retained_blocks = 0;
        double retained_mean_sum = 0.0;
        long long picks = 0;
        long long overshoot_picks = 0;
    };

    long long block_length(std::size_t i) const { return block_len_[i]; }
    double score(std::size_t i) const;
    std::size_t select() const;
    long long macrostep(MacroFeed& feed, long long max_rounds);
    const Arm& arm(std::size_t i) const { return arms_[i]; }

private:
    long long T_;
    double log_conf_;
    long long block_len_[2];
    Arm arms_[2];
};

void run_two_ucb(SaleFeed& feed, TraceRecorder& rec, long long T, double gamma1, double gamma2,
                 double delta);

// Cautious mean estimation (the K = 2 workhorse): given a probe price w
// intended to lie in (v_1, v_2], either certifies an optimal valuation or
// returns multiplicative estimates p_i/3 < p_hat_i < p_i of both masses.
struct CmeResult {
    enum class Kind { kEstimates, kV1Optimal, kV2Optimal, kInconclusive };
    Kind kind = Kind::kInconclusive;
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double p2 = std::numeric_limits<double>::quiet_NaN();
};

CmeResult cautious_mean_estimation(SaleFeed& feed, TraceRecorder& rec, double w, double log_conf,
                                   long long T);

// The full pipeline: bracket search, capped estimation at the bracket top,
// probe-price selection, cautious mean estimation, then either a final noisy
// cautious search (clear optimum) or 2-UCB with the estimated masses.
struct TwoValuationReport {
    double bracket_low = 0.0;
    double bracket_high = 1.0;
    double probe_price = 0.0;
    CmeResult cme;
};

void run_two_valuation(SaleFeed& feed, TraceRecorder& rec, long long T, double delta,
                       TwoValuationReport* report = nullptr);

}  // namespace pricer
