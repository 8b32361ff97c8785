#include "pricer/two_valuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pricer {

namespace {

// Feed wrapper that records every offer and enforces the shared horizon.
class RecordingFeed final : public SaleFeed {
public:
    RecordingFeed(SaleFeed& inner, TraceRecorder& rec) : inner_(&inner), rec_(&rec) {}

    bool offer(double price) override {
        const bool sale = inner_->offer(price);
        rec_->record(price, sale ? 1.0 : 0.0);
        return sale;
    }

private:
    SaleFeed* inner_;
    TraceRecorder* rec_;
};

}  // namespace

TwoUcb::TwoUcb(long long T, double gamma1, double gamma2, double delta) : T_(T) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
    if (!(gamma1 > 0.0 && gamma1 < 1.0) || !(gamma2 > 0.0 && gamma2 < 1.0)) {
        throw std::invalid_argument("gamma_i must lie in (0,1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    log_conf_ = std::log(1.0 / delta);
    block_len_[0] = static_cast<long long>(std::ceil(8.0 * log_conf_ / -std::log1p(-gamma1)));
    block_len_[1] = static_cast<long long>(std::ceil(8.0 * log_conf_ / -std::log1p(-gamma2)));
}

double TwoUcb::score(std::size_t i) const {
    const Arm& arm = arms_[i];
    const long long n = arm.retained_blocks * block_len_[i];
    if (n == 0) return std::numeric_limits<double>::infinity();
    const double mean = arm.retained_mean_sum / static_cast<double>(arm.retained_blocks);
    return arm.b * mean + std::sqrt(log_conf_ / static_cast<double>(n));
}

std::size_t TwoUcb::select() const { return score(1) > score(0) ? 1 : 0; }

long long TwoUcb::macrostep(MacroFeed& feed, long long max_rounds) {
    if (max_rounds <= 0) return 0;
    const std::size_t i = select();
    Arm& arm = arms_[i];
    const long long want = block_len_[i];
    const long long rounds = std::min(want, max_rounds);
    const bool truncated = rounds < want;

    if (arm.b - arm.a <= 1.0 / static_cast<double>(T_)) {
        const double mean = feed.offer_block(arm.a, rounds);
        if (!truncated) {
            ++arm.picks;
            ++arm.retained_blocks;
            arm.retained_mean_sum += mean;
        }
        return rounds;
    }

    const double x = arm.a + static_cast<double>(arm.n) * arm.eps;
    const double mean = feed.offer_block(x, rounds);
    if (truncated) return rounds;
    ++arm.picks;

    // Arm 0 hunts the smallest valuation: any rejection is an overshoot.
    // Arm 1 hunts the largest: only a total rejection is.
    const bool success = (i == 0) ? (mean == 1.0) : (mean > 0.0);
    if (success) {
        ++arm.retained_blocks;
        arm.retained_mean_sum += mean;
        if (x + arm.eps < arm.b) {
            ++arm.n;
        } else {
            arm.a = x;
            arm.n = 0;
            arm.eps *= arm.eps;
        }
    } else {
        ++arm.overshoot_picks;
        arm.a = x - arm.eps;
        arm.b = x;
        arm.n = 0;
        arm.eps *= arm.eps;
    }
    return rounds;
}

void run_two_ucb(SaleFeed& feed, TraceRecorder& rec, long long T, double gamma1, double gamma2,
                 double delta) {
    TwoUcb policy(T, gamma1, gamma2, delta);
    SamplingMacroFeed macro(feed, rec);
    long long remaining = T;
    while (remaining > 0) {
        const long long spent = policy.macrostep(macro, remaining);
        if (spent <= 0) break;
        remaining -= spent;
    }
}

CmeResult cautious_mean_estimation(SaleFeed& raw_feed, TraceRecorder& rec, double w,
                                   double log_conf, long long T) {
    RecordingFeed feed(raw_feed, rec);
    auto remaining = [&]() { return T - rec.rounds(); };

    CmeResult out;
    JointCappedEstimation joint(0.25, log_conf);
    joint.run(feed, w, remaining());
    if (joint.budget_exhausted()) return out;

    if (joint.demand_well_estimated() && joint.complement_well_estimated()) {
        out.kind = CmeResult::Kind::kEstimates;
        out.p1 = joint.complement_side().value;
        out.p2 = joint.demand_side().value;
        return out;
    }

    const long long probe_len =
        static_cast<long long>(std::ceil(log_conf / -std::log(3.0 / 4.0)));

    if (joint.complement_well_estimated()) {
        // p_1 > 3/4: sweep prices 2^-s downward looking for a price that is
        // always accepted (then v_1 >= 2^-s dominates), refining the capped
        // estimation in between.
        const int s_max = static_cast<int>(std::ceil(std::log2(static_cast<double>(T))));
        for (int s = 2; s <= s_max; ++s) {
            const double probe = std::ldexp(1.0, -s);
            bool all_accepted = true;
            for (long long r = 0; r < probe_len; ++r) {
                if (remaining() <= 0) return out;
                if (!feed.offer(probe)) {
                    all_accepted = false;
                    break;
                }
            }
            if (all_accepted) {
                out.kind = CmeResult::Kind::kV1Optimal;
                return out;
            }
            joint.lower_threshold(std::ldexp(1.0, -(s + 1)));
            joint.run(feed, w, remaining());
            if (joint.budget_exhausted()) return out;
            if (joint.demand_well_estimated() && joint.complement_well_estimated()) {
                out.kind = CmeResult::Kind::kEstimates;
                out.p1 = joint.complement_side().value;
                out.p2 = joint.demand_side().value;
                return out;
            }
        }
        return out;  // s exhausted: inconclusive
    }

    if (joint.demand_well_estimated()) {
        // p_2 > 3/4: locate v_2 with a noisy cautious search while estimating
        // p_1 from its successful macrosteps, then try to prune v_1.
        NoisyCautiousSearch search({2, 0.75, log_conf, T});
        auto est = capped_on_search(search, raw_feed, rec, 0.0, log_conf, true, remaining());
        if (!est.estimate_ready) return out;
        const double p1_hat = est.p_hat;
        const double q2_hat = 1.0 - p1_hat;
        const double prune = std::clamp(est.v_hat * q2_hat - p1_hat, 0.0, 1.0);
        const long long prune_len = static_cast<long long>(std::ceil(log_conf / p1_hat));
        for (long long r = 0; r < prune_len; ++r) {
            if (remaining() <= 0) return out;
            if (!feed.offer(prune)) {
                out.kind = CmeResult::Kind::kV2Optimal;
                return out;
            }
        }
        out.kind = CmeResult::Kind::kEstimates;
        out.p1 = p1_hat;
        out.p2 = joint.demand_side().value;
        return out;
    }

    return out;  // neither side settled: inconclusive
}

void run_two_valuation(SaleFeed& raw_feed, TraceRecorder& rec, long long T, double delta,
                       TwoValuationReport* report) {
    if (T < 4) throw std::invalid_argument("T must be at least 4");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    const double log_conf = std::log(1.0 / delta);
    RecordingFeed feed(raw_feed, rec);
    auto remaining = [&]() { return T - rec.rounds(); };

    // Phase 1: majority bisection bracketing a valuation.
    const int depth = static_cast<int>(std::ceil(std::log2(static_cast<double>(T))));
    const long long reps = static_cast<long long>(std::ceil(log_conf / std::log(4.0 / 3.0)));
    double lo = 0.0;
    double hi = 1.0;
    for (int d = 0; d < depth && remaining() > 0; ++d) {
        const double mid = 0.5 * (lo + hi);
        long long accepted = 0;
        long long offered = 0;
        for (long long r = 0; r < reps && remaining() > 0; ++r) {
            ++offered;
            if (feed.offer(mid)) ++accepted;
        }
        if (offered < reps) break;
        if (2 * accepted > reps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double a1 = lo;
    const double a2 = hi;
    if (report) {
        report->bracket_low = a1;
        report->bracket_high = a2;
    }

    // Capped estimation of the demand at the bracket top, threshold a_1.
    double w = a1;
    if (remaining() > 0) {
        auto capped = capped_mean_estimation(feed, a2, a1, log_conf, false, remaining());
        if (capped.status == BernsteinEstimator::Status::kReady && capped.estimate > 0.0) {
            w = a2;
        } else {
            // Check whether a_1 already exceeds v_1 by offering it until a
            // rejection; the number of offers stays within the O(log T / a_1)
            // budget of the phase.
            const double denom = std::max(a1, 1.0 / static_cast<double>(T));
            const long long tries = static_cast<long long>(
                std::ceil(2.0 * std::log(static_cast<double>(T)) / denom));
            for (long long r = 0; r < tries && remaining() > 0; ++r) {
                if (!feed.offer(a1)) break;
            }
            w = a1;
        }
    }
    if (report) report->probe_price = w;

    CmeResult cme;
    if (remaining() > 0) {
        cme = cautious_mean_estimation(raw_feed, rec, w, log_conf, T);
    }
    if (report) report->cme = cme;

    if (cme.kind == CmeResult::Kind::kV1Optimal || cme.kind == CmeResult::Kind::kV2Optimal) {
        // Clear optimum: chase it with a noisy cautious search, lower bound 1/2.
        const int target = cme.kind == CmeResult::Kind::kV1Optimal ? 1 : 2;
        NoisyCautiousSearch search({target, 0.5, log_conf, T});
        NullRecorder ignored;
        while (remaining() > 0) {
            auto step = search.run_macrostep(feed, ignored, remaining());
            if (step.rounds <= 0) break;
        }
        return;
    }
    if (cme.kind == CmeResult::Kind::kEstimates) {
        const double g1 = std::clamp(cme.p1, 1.0 / static_cast<double>(T), 1.0 - 1e-9);
        const double g2 = std::clamp(cme.p2, 1.0 / static_cast<double>(T), 1.0 - 1e-9);
        TwoUcb policy(T, g1, g2, delta);
        SamplingMacroFeed macro(raw_feed, rec);
        while (remaining() > 0) {
            const long long spent = policy.macrostep(macro, remaining());
            if (spent <= 0) break;
        }
        return;
    }
    // Inconclusive: the horizon was exhausted inside a subroutine (or the
    // estimates never settled); spend whatever is left on the probe price.
    while (remaining() > 0) feed.offer(w);
}

}  // namespace pricer
