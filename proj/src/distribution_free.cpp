#include "pricer/distribution_free.hpp"

#include <cmath>
#include <stdexcept>

#include "pricer/bandit.hpp"

namespace pricer {

SearchPhase::SearchPhase(long long T, double log_conf, DistributionFreeOptions opts)
    : T_(T), log_conf_(log_conf), opts_(opts) {
    if (T < 4) throw std::invalid_argument("T must be at least 4");
    if (!(log_conf > 0.0)) throw std::invalid_argument("ln(1/delta) must be positive");
    width_floor_ = 1.0 / std::sqrt(static_cast<double>(T));
    arms_.push_back(SearchArm{0.0, 1.0, true});
    dbar_[0.0] = opts_.demand_one_at_zero ? 1.0 : 0.0;
}

long long SearchPhase::macrostep_length() const {
    return static_cast<long long>(
        std::ceil(8.0 * std::sqrt(static_cast<double>(T_) / static_cast<double>(k_)) * log_conf_));
}

double SearchPhase::detection_threshold() const {
    return 0.5 * std::pow(static_cast<double>(k_) / static_cast<double>(T_), 0.25);
}

bool SearchPhase::done() const {
    for (const SearchArm& arm : arms_) {
        if (arm.active && arm.b - arm.a > width_floor_) return false;
    }
    return true;
}

std::vector<double> SearchPhase::surviving_left_endpoints() const {
    std::vector<double> out;
    for (const SearchArm& arm : arms_) {
        if (arm.active) out.push_back(arm.a);
    }
    return out;
}

double SearchPhase::measure(SaleFeed& feed, TraceRecorder& rec, double price, long long* budget,
                            bool* truncated) {
    const long long want = macrostep_length();
    long long rounds = want;
    if (budget && *budget < rounds) rounds = *budget;
    *truncated = rounds < want;
    if (rounds <= 0) return -1.0;
    long long accepted = 0;
    for (long long r = 0; r < rounds; ++r) {
        const bool sale = feed.offer(price);
        rec.record(price, sale ? 1.0 : 0.0);
        if (sale) ++accepted;
    }
    if (budget) *budget -= rounds;
    const double mean = static_cast<double>(accepted) / static_cast<double>(rounds);
    dbar_[price] = mean;  // statistics of truncated macrosteps are still used
    return mean;
}

bool SearchPhase::spawn_test(double x, double dbar_x, std::size_t current) const {
    const double th = detection_threshold();
    // Synthetic anchor at price 0 with estimate 0: requires the demand at x
    // itself to clear the threshold (nothing to find above x otherwise).
    if (!(dbar_x >= th)) return false;
    for (std::size_t j = 0; j < arms_.size(); ++j) {
        if (!arms_[j].active || j == current) continue;
        const double aj = arms_[j].a;
        if (aj == x) return false;
        const double sign = (x > aj) ? 1.0 : -1.0;
        if (!(sign * (dbar_.at(aj) - dbar_x) >= th)) return false;
    }
    return true;
}

bool SearchPhase::step(SaleFeed& feed, TraceRecorder& rec, long long* budget) {
    std::size_t pick = arms_.size();
    for (std::size_t j = 0; j < arms_.size(); ++j) {
        if (arms_[j].active && arms_[j].b - arms_[j].a > width_floor_) {
            pick = j;
            break;
        }
    }
    if (pick == arms_.size()) return false;  // search phase over

    const double a = arms_[pick].a;
    const double b = arms_[pick].b;
    const double x = 0.5 * (a + b);
    bool truncated = false;
    const double dbar_x = measure(feed, rec, x, budget, &truncated);
    if (dbar_x < 0.0) return false;  // no budget for a single round
    ++macrosteps_;
    const double th = detection_threshold();

    if (dbar_.at(a) - dbar_x < th) {
        // Undershooting: no relevant valuation detected in (a, x].
        if (dbar_.find(b) == dbar_.end()) {
            bool b_truncated = false;
            const double got = measure(feed, rec, b, budget, &b_truncated);
            if (got < 0.0) return false;
            truncated = truncated || b_truncated;
            ++macrosteps_;
        }
        if (dbar_x - dbar_.at(b) >= th) {
            arms_[pick].a = x;
        } else {
            arms_[pick].active = false;  // fake arm
        }
    } else {
        // Overshooting: a relevant valuation sits in (a, x].
        if (spawn_test(x, dbar_x, pick)) {
            arms_.push_back(SearchArm{x, b, true});
            ++k_;
        }
        arms_[pick].b = x;
    }
    return !truncated;
}

void run_distribution_free(SaleFeed& feed, TraceRecorder& rec, long long T, double delta,
                           DistributionFreeOptions opts) {
    if (T < 4) throw std::invalid_argument("T must be at least 4");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    const double log_conf = std::log(1.0 / delta);

    SearchPhase phase(T, log_conf, opts);
    long long budget = T;
    while (budget > 0 && phase.step(feed, rec, &budget)) {
    }

    std::vector<double> prices = phase.surviving_left_endpoints();
    if (prices.empty()) {
        // Every arm was removed as fake; fall back to all allocated anchors.
        for (const SearchArm& arm : phase.arms()) prices.push_back(arm.a);
    }
    if (budget <= 0) return;  // the search phase exhausted the horizon

    UcbPolicy ucb(prices.size(), log_conf);
    for (long long t = 0; t < budget; ++t) {
        const std::size_t arm = ucb.select();
        const bool sale = feed.offer(prices[arm]);
        rec.record(prices[arm], sale ? 1.0 : 0.0);
        ucb.update(arm, prices[arm] * (sale ? 1.0 : 0.0));
    }
}

}  // namespace pricer
