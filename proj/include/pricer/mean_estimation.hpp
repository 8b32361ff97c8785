#pragma once

#include <cstdint>

#include "pricer/environment.hpp"

namespace pricer {

// Empirical-Bernstein stopping machinery: a running (mean, variance) pair
// with the multiplicative stopping rule
//     mean/(alpha+1) >= sqrt(2 var ln(1/delta)/t) + (7/3) ln(1/delta)/(t-1)
// and, when theta > 0, a cap of ceil(40 ln(1/delta)/theta) + 2 samples after
// which the mean is certified to be at most theta.  theta = 0 means uncapped.
// With complement = true each sample x is fed as 1 - x, so the estimator
// tracks 1 - mu of the source stream.
class BernsteinEstimator {
public:
    struct Options {
        double alpha = 1.0;
        double log_conf = 1.0;  // ln(1/delta)
        double theta = 0.0;
        bool complement = false;
    };

    enum class Status { kContinue, kReady, kBelowThreshold };

    explicit BernsteinEstimator(const Options& opts);

    void feed(double x);  // rejects x outside [0,1]

    long long count() const { return t_; }
    double mean() const { return mean_; }
    // Sample variance with divisor t-1; zero below two samples.
    double variance() const { return t_ > 1 ? m2_ / static_cast<double>(t_ - 1) : 0.0; }

    Status status() const;
    // (alpha/(alpha+1)) * mean; only valid once status() is kReady.
    double estimate() const;

    long long cap() const;  // sample cap for theta > 0, -1 when uncapped
    void set_theta(double theta);

    // Theorem-level bound t_0 on the stopping time, exposed for tests.
    static long long stopping_time_bound(double mu, double alpha, double log_conf);

    const Options& options() const { return opts_; }

private:
    bool stop_condition_holds() const;

    Options opts_;
    long long t_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;  // sum of squared deviations (Welford)
};

struct CappedVerdict {
    bool well_estimated = false;
    double value = 0.0;  // estimate when well_estimated, else the threshold
};

// Joint capped estimation of D(w) and 1 - D(w) on one sample stream.  Both
// sides see every sample; the loop runs while either still wants data.  The
// state persists across run() calls so the threshold can be lowered and the
// estimation resumed with all samples retained.
class JointCappedEstimation {
public:
    JointCappedEstimation(double theta, double log_conf, double alpha = 1.0);

    // Offers `price` until both sides settle or the budget runs out; returns
    // the number of offers spent.
    long long run(SaleFeed& feed, double price, long long budget);

    void lower_threshold(double theta);

    bool demand_well_estimated() const;
    bool complement_well_estimated() const;
    CappedVerdict demand_side() const;      // D(w)
    CappedVerdict complement_side() const;  // 1 - D(w)
    long long samples() const { return samples_; }
    bool budget_exhausted() const { return budget_exhausted_; }

private:
    BernsteinEstimator direct_;
    BernsteinEstimator reverse_;
    long long samples_ = 0;
    bool budget_exhausted_ = false;
};

// Single-sided capped estimation at a fixed price (the joint variant's
// machinery restricted to one side).
struct CappedResult {
    BernsteinEstimator::Status status = BernsteinEstimator::Status::kContinue;
    double estimate = 0.0;  // valid when status == kReady
    long long samples = 0;
};

CappedResult capped_mean_estimation(SaleFeed& feed, double price, double theta, double log_conf,
                                    bool complement, long long budget);

}  // namespace pricer
