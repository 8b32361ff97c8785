#include "pricer/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pricer {

UcbPolicy::UcbPolicy(std::size_t arms, double log_conf) : log_conf_(log_conf) {
    if (arms == 0) throw std::invalid_argument("need at least one arm");
    if (!(log_conf > 0.0)) throw std::invalid_argument("ln(1/delta) must be positive");
    arms_.resize(arms);
    for (std::size_t k = 0; k < arms; ++k) push_entry(k);
}

void UcbPolicy::set_inflation(std::size_t arm, double alpha, double gamma) {
    if (!(alpha >= 0.0) || !(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("need alpha >= 0 and gamma in (0,1]");
    }
    arms_[arm].alpha = alpha;
    arms_[arm].gamma = gamma;
    ++arms_[arm].version;
    push_entry(arm);
}

double UcbPolicy::mean(std::size_t arm) const {
    const Arm& a = arms_[arm];
    return a.pulls == 0 ? 0.0 : a.reward_sum / static_cast<double>(a.pulls);
}

double UcbPolicy::index(std::size_t arm) const {
    const Arm& a = arms_[arm];
    if (a.pulls == 0) return std::numeric_limits<double>::infinity();
    const double s = static_cast<double>(a.pulls);
    double radius = std::sqrt(log_conf_ / s);
    if (a.alpha > 0.0) radius += a.alpha * log_conf_ / (a.gamma * a.gamma * s);
    return a.reward_sum / s + radius;
}

void UcbPolicy::push_entry(std::size_t arm) {
    heap_.push(HeapEntry{index(arm), arm, arms_[arm].version});
}

std::size_t UcbPolicy::select() {
    while (true) {
        const HeapEntry& top = heap_.top();
        if (top.version == arms_[top.arm].version) return top.arm;
        heap_.pop();  // stale entry from an earlier update
    }
}

void UcbPolicy::update(std::size_t arm, double reward) {
    if (!(reward >= 0.0 && reward <= 1.0)) throw std::invalid_argument("reward must lie in [0,1]");
    Arm& a = arms_[arm];
    a.reward_sum += reward;
    ++a.pulls;
    ++a.version;
    push_entry(arm);
}

Exp3Policy::Exp3Policy(std::size_t arms, double learning_rate)
    : cum_loss_(arms, 0.0), eta_(learning_rate) {
    if (arms < 2) throw std::invalid_argument("Exp3 needs at least two arms");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
}

double Exp3Policy::horizon_rate(std::size_t arms, long long T) {
    return std::sqrt(2.0 * std::log(static_cast<double>(arms)) /
                     (static_cast<double>(T) * static_cast<double>(arms)));
}

std::vector<double> Exp3Policy::probabilities() const {
    // Stable softmax over -eta * cumulative loss.
    const double low = *std::min_element(cum_loss_.begin(), cum_loss_.end());
    std::vector<double> p(cum_loss_.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::exp(-eta_ * (cum_loss_[k] - low));
        sum += p[k];
    }
    for (double& x : p) x /= sum;
    return p;
}

std::size_t Exp3Policy::sample(Rng& rng) const {
    const std::vector<double> p = probabilities();
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        cum += p[k];
        if (u < cum) return k;
    }
    return p.size() - 1;
}

void Exp3Policy::update(std::size_t arm, double loss) {
    if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("loss must lie in [0,1]");
    const std::vector<double> p = probabilities();
    cum_loss_[arm] += loss / p[arm];  // importance-weighted estimate
}

}  // namespace pricer
