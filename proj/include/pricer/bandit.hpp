#pragma once

#include <cstddef>
#include <queue>
#include <vector>

#include "pricer/rng.hpp"

namespace pricer {

// UCB with optionally inflated confidence bounds.  The index of arm k after
// s pulls is
//     mean(k) + alpha*ln(1/delta)/(gamma^2 s) + sqrt(ln(1/delta)/s)
// when the arm is marked inflated (alpha > 0 applies only to such arms), and
// mean(k) + sqrt(ln(1/delta)/s) otherwise; +infinity while s = 0.  Plain
// UCB1 is the alpha = 0 case with ln(1/delta) = 2 ln T.
//
// Because the exploration radius depends only on the arm's own pull count,
// indices of untouched arms never move; selection uses a lazy max-heap and
// costs O(log K) per round.  Ties break toward the lowest arm index.
class UcbPolicy {
public:
    UcbPolicy(std::size_t arms, double log_conf);

    void set_inflation(std::size_t arm, double alpha, double gamma);

    double index(std::size_t arm) const;
    std::size_t select();
    void update(std::size_t arm, double reward);  // reward must lie in [0,1]

    long long pulls(std::size_t arm) const { return arms_[arm].pulls; }
    double mean(std::size_t arm) const;
    std::size_t arm_count() const { return arms_.size(); }

private:
    struct Arm {
        double reward_sum = 0.0;
        long long pulls = 0;
        double alpha = 0.0;
        double gamma = 1.0;
        std::uint64_t version = 0;
    };
    struct HeapEntry {
        double value;
        std::size_t arm;
        std::uint64_t version;
        bool operator<(const HeapEntry& o) const {
            if (value != o.value) return value < o.value;
            return arm > o.arm;  // lower index wins ties
        }
    };

    void push_entry(std::size_t arm);

    double log_conf_;
    std::vector<Arm> arms_;
    std::priority_queue<HeapEntry> heap_;
};

// Exp3 with importance-weighted loss estimates and a fixed learning rate.
// Sampling probabilities are proportional to exp(-eta * cumulative estimated
// loss); losses must lie in [0,1].
class Exp3Policy {
public:
    Exp3Policy(std::size_t arms, double learning_rate);

    // Horizon-tuned rate sqrt(2 ln K / (T K)).
    static double horizon_rate(std::size_t arms, long long T);

    std::vector<double> probabilities() const;
    std::size_t sample(Rng& rng) const;
    void update(std::size_t arm, double loss);

    std::size_t arm_count() const { return cum_loss_.size(); }

private:
    std::vector<double> cum_loss_;
    double eta_;
};

}  // namespace pricer
