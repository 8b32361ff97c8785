#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pricer/rng.hpp"

namespace pricer {

// Finite-support distribution over buyer valuations v_1 < ... < v_K in [0,1]
// with probabilities p_k > 0 summing to one.  Immutable after construction;
// safe to share across threads.
class ValuationDistribution {
public:
    ValuationDistribution(std::vector<double> valuations, std::vector<double> probabilities);

    std::size_t size() const { return valuations_.size(); }
    const std::vector<double>& valuations() const { return valuations_; }
    const std::vector<double>& probabilities() const { return probabilities_; }
    double valuation(std::size_t k) const { return valuations_[k]; }
    double probability(std::size_t k) const { return probabilities_[k]; }

    // D(x) = P(V >= x); price must lie in [0,1].
    double demand_at(double price) const;
    double revenue_at(double price) const { return price * demand_at(price); }
    double min_probability() const;

    // Returns v_k with probability p_k; deterministic given the rng state.
    double sample_buyer(Rng& rng) const;

private:
    std::vector<double> valuations_;
    std::vector<double> probabilities_;
    std::vector<double> suffix_;  // suffix_[k] = p_k + ... + p_K
};

struct DemandPoint {
    double price;
    double demand;
    double revenue;  // price * demand by construction
};

DemandPoint demand_point(const ValuationDistribution& model, double price);

struct InstanceSummary {
    double optimal_price;
    double optimal_revenue;
    std::vector<double> gaps;                 // gaps[k] = optimal_revenue - v_k D(v_k)
    std::optional<double> min_gap_positive;   // absent when all gaps are zero
    double min_prob;
    std::optional<double> min_spacing;        // min adjacent valuation difference, K >= 2
};

// Optimal price is the smallest valuation attaining the maximum revenue.
InstanceSummary summarize(const ValuationDistribution& model);

// The two instances from the sqrt(T) distribution-dependent lower bound.
// Instance 1: {(0, 1/2), (1/2, 1/2)}.
// Instance 2: {(0, 1/2 - eta), ((1-eta)/2, eta), (1/2, 1/2)}, 0 < eta <= 1/4.
ValuationDistribution gen_theorem2_instance(int which, double eta = 0.0);

// K+1 support points v_i = 1/2 + i/(2K), i = 0..K.  j = 0 gives the base
// distribution with P(V >= v) = 1/(2v) (every support point has revenue 1/2);
// j in [ceil(K/2), K] moves mass 4*K*eps*p0(v_{j-1}) from v_{j-1} to v_j so
// that v_j earns at least 1/2 + eps.
ValuationDistribution gen_lowerbound_family(int K, int j, double epsilon);

// Key/value instance files:
//   K = 2
//   v0 = 0.3
//   p0 = 0.5
//   ...
ValuationDistribution load_instance(const std::string& path);
void save_instance(const ValuationDistribution& model, const std::string& path);
std::string instance_to_text(const ValuationDistribution& model);

// Named generators addressable from the CLI, e.g. "theorem2-1",
// "theorem2-2:eta=0.1", "lowerbound:K=4,j=3,eps=0.01", or a file path.
ValuationDistribution make_instance(const std::string& selector);
std::vector<std::string> instance_generator_names();

}  // namespace pricer
