#include "pricer/gamma_pricer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pricer {

GammaPricer::GammaPricer(long long T, double gamma, double delta) : T_(T), gamma_(gamma) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    log_conf_ = std::log(1.0 / delta);
    block_len_ = static_cast<long long>(std::ceil(8.0 * log_conf_ / (gamma * gamma)));
    max_macrosteps_ = T / block_len_;  // biggest M with T >= M * B
    arms_.push_back(Arm{});
    dbar_[0.0] = 1.0;  // D(a_1) pinned at initialization
}

double GammaPricer::dhat(std::size_t i) const {
    const Arm& arm = arms_[i];
    if (arm.retained_blocks == 0) return 0.0;
    return arm.retained_mean_sum / static_cast<double>(arm.retained_blocks);
}

long long GammaPricer::retained_rounds(std::size_t i) const {
    return arms_[i].retained_blocks * block_len_;
}

double GammaPricer::score(std::size_t i) const {
    const long long n = retained_rounds(i);
    if (n == 0) return std::numeric_limits<double>::infinity();
    return arms_[i].b * dhat(i) + std::sqrt(log_conf_ / static_cast<double>(n));
}

std::size_t GammaPricer::select() const {
    std::size_t best = 0;
    double best_score = score(0);
    for (std::size_t i = 1; i < arms_.size(); ++i) {
        const double s = score(i);
        if (s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

bool GammaPricer::spawn_test(double x, double dbar_x, std::size_t current) const {
    const double th = gamma_ / 2.0;
    // Synthetic anchor a_0 = 0 with estimate 0: the demand at x itself must
    // clear the threshold.
    if (!(dbar_x >= th)) return false;
    for (std::size_t j = 0; j < arms_.size(); ++j) {
        if (j == current) continue;
        const double aj = arms_[j].a;
        if (aj == x) return false;
        const double sign = (x > aj) ? 1.0 : -1.0;
        if (!(sign * (dbar_.at(aj) - dbar_x) >= th)) return false;
    }
    return true;
}

long long GammaPricer::macrostep(MacroFeed& feed, long long max_rounds) {
    if (max_rounds <= 0) return 0;
    const std::size_t i = select();
    const long long rounds = std::min(block_len_, max_rounds);
    const bool truncated = rounds < block_len_;

    if (arms_[i].b - arms_[i].a <= 1.0 / static_cast<double>(T_)) {
        // Tiny interval: play the left endpoint; the samples are honest
        // draws at the anchor and count toward the retained statistics.
        const double mean = feed.offer_block(arms_[i].a, rounds);
        if (!truncated) {
            Arm& arm = arms_[i];
            ++arm.picks;
            ++arm.retained_blocks;
            arm.retained_mean_sum += mean;
            dbar_[arm.a] = mean;
        }
        return rounds;
    }

    const double x = arms_[i].a + static_cast<double>(arms_[i].n) * arms_[i].eps;
    const double mean = feed.offer_block(x, rounds);
    if (truncated) return rounds;  // partial final macrostep: no update

    dbar_[x] = mean;
    Arm& arm = arms_[i];
    ++arm.picks;

    if (dbar_.at(arm.a) - mean < gamma_ / 2.0) {
        // Same demand as the anchor: keep raising the price.
        ++arm.retained_blocks;
        arm.retained_mean_sum += mean;
        if (x + arm.eps < arm.b) {
            ++arm.n;
        } else {
            arm.a = x;
            arm.n = 0;  // next pick re-measures the fresh anchor
            arm.eps *= arm.eps;
        }
    } else {
        if (spawn_test(x, mean, i)) {
            Arm fresh;
            fresh.a = x;
            fresh.b = arm.b;
            fresh.n = 1;
            fresh.eps = arm.eps;
            // The allocation macrostep seeds the fresh arm's statistics.
            fresh.retained_blocks = 1;
            fresh.retained_mean_sum = mean;
            fresh.picks = 1;
            arms_.push_back(fresh);
        }
        Arm& shrink = arms_[i];  // push_back may have moved the vector
        ++shrink.overshoot_picks;
        shrink.a = x - shrink.eps;
        shrink.b = x;
        shrink.n = 0;
        shrink.eps *= shrink.eps;
    }
    return rounds;
}

void run_gamma_pricer(SaleFeed& feed, TraceRecorder& rec, long long T, double gamma,
                      double delta) {
    GammaPricer pricer(T, gamma, delta);
    SamplingMacroFeed macro(feed, rec);
    long long remaining = T;
    while (remaining > 0) {
        const long long spent = pricer.macrostep(macro, remaining);
        if (spent <= 0) break;
        remaining -= spent;
    }
}

}  // namespace pricer
