#include "pricer/mean_estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace pricer {

BernsteinEstimator::BernsteinEstimator(const Options& opts) : opts_(opts) {
    if (!(opts.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(opts.log_conf > 0.0)) throw std::invalid_argument("ln(1/delta) must be positive");
    if (!(opts.theta >= 0.0 && opts.theta <= 1.0)) throw std::invalid_argument("theta in [0,1]");
}

void BernsteinEstimator::feed(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("sample must lie in [0,1]");
    if (opts_.complement) x = 1.0 - x;
    ++t_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(t_);
    m2_ += delta * (x - mean_);
}

bool BernsteinEstimator::stop_condition_holds() const {
    if (t_ < 2) return false;
    const double t = static_cast<double>(t_);
    const double radius = std::sqrt(2.0 * variance() * opts_.log_conf / t) +
                          (7.0 / 3.0) * opts_.log_conf / (t - 1.0);
    return mean_ / (opts_.alpha + 1.0) >= radius;
}

long long BernsteinEstimator::cap() const {
    if (opts_.theta <= 0.0) return -1;  // 1/theta read as infinity
    return static_cast<long long>(std::ceil(40.0 * opts_.log_conf / opts_.theta)) + 2;
}

void BernsteinEstimator::set_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta in [0,1]");
    opts_.theta = theta;
}

BernsteinEstimator::Status BernsteinEstimator::status() const {
    if (stop_condition_holds()) return Status::kReady;
    if (opts_.theta > 0.0 && t_ > cap()) return Status::kBelowThreshold;
    return Status::kContinue;
}

double BernsteinEstimator::estimate() const {
    if (status() != Status::kReady) throw std::logic_error("estimate requested before ready");
    return (opts_.alpha / (opts_.alpha + 1.0)) * mean_;
}

long long BernsteinEstimator::stopping_time_bound(double mu, double alpha, double log_conf) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    const double big = std::sqrt(9.0 * alpha * alpha + 114.0 * alpha + 192.0) + 3.0 * alpha + 19.0;
    return static_cast<long long>(std::ceil((alpha + 2.0) / (3.0 * mu) * log_conf * big)) + 2;
}

JointCappedEstimation::JointCappedEstimation(double theta, double log_conf, double alpha)
    : direct_({alpha, log_conf, theta, false}), reverse_({alpha, log_conf, theta, true}) {}

void JointCappedEstimation::lower_threshold(double theta) {
    direct_.set_theta(theta);
    reverse_.set_theta(theta);
}

long long JointCappedEstimation::run(SaleFeed& feed, double price, long long budget) {
    long long spent = 0;
    budget_exhausted_ = false;
    while (direct_.status() == BernsteinEstimator::Status::kContinue ||
           reverse_.status() == BernsteinEstimator::Status::kContinue) {
        if (spent >= budget) {
            budget_exhausted_ = true;
            break;
        }
        const double sale = feed.offer(price) ? 1.0 : 0.0;
        direct_.feed(sale);
        reverse_.feed(sale);
        ++spent;
        ++samples_;
    }
    return spent;
}

bool JointCappedEstimation::demand_well_estimated() const {
    return direct_.status() == BernsteinEstimator::Status::kReady;
}

bool JointCappedEstimation::complement_well_estimated() const {
    return reverse_.status() == BernsteinEstimator::Status::kReady;
}

CappedVerdict JointCappedEstimation::demand_side() const {
    return demand_well_estimated() ? CappedVerdict{true, direct_.estimate()}
                                   : CappedVerdict{false, direct_.options().theta};
}

CappedVerdict JointCappedEstimation::complement_side() const {
    return complement_well_estimated() ? CappedVerdict{true, reverse_.estimate()}
                                       : CappedVerdict{false, reverse_.options().theta};
}

CappedResult capped_mean_estimation(SaleFeed& feed, double price, double theta, double log_conf,
                                    bool complement, long long budget) {
    BernsteinEstimator est({1.0, log_conf, theta, complement});
    CappedResult out;
    while (est.status() == BernsteinEstimator::Status::kContinue && out.samples < budget) {
        est.feed(feed.offer(price) ? 1.0 : 0.0);
        ++out.samples;
    }
    out.status = est.status();
    if (out.status == BernsteinEstimator::Status::kReady) out.estimate = est.estimate();
    return out;
}

}  // namespace pricer
