#include "pricer/noisy_search.hpp"

#include <cmath>
#include <stdexcept>

namespace pricer {

namespace {

double phase_step(int s) {
    double eps = 0.5;
    for (int i = 0; i < s; ++i) eps *= eps;  // 2^(-2^s)
    return eps;
}

}  // namespace

NoisyCautiousSearch::NoisyCautiousSearch(const Options& opts) : opts_(opts) {
    if (opts.target != 1 && opts.target != 2) throw std::invalid_argument("target must be 1 or 2");
    if (!(opts.gamma > 0.0 && opts.gamma < 1.0)) throw std::invalid_argument("gamma in (0,1)");
    if (!(opts.log_conf > 0.0)) throw std::invalid_argument("ln(1/delta) must be positive");
    if (opts.horizon < 2) throw std::invalid_argument("horizon must be at least 2");
    macro_len_ = static_cast<long long>(std::ceil(opts.log_conf / -std::log1p(-opts.gamma)));
    if (macro_len_ < 1) macro_len_ = 1;
    const double loglog = std::log2(std::log2(static_cast<double>(opts.horizon)));
    max_phase_ = std::max(0, static_cast<int>(std::ceil(loglog)));
    skip_too_narrow_phases();
}

double NoisyCautiousSearch::next_price() const {
    if (finished()) return a_;
    return a_ + static_cast<double>(n_) * eps_;
}

void NoisyCautiousSearch::advance_phase(double new_a, double new_b) {
    a_ = new_a;
    b_ = new_b;
    ++phase_;
    n_ = 1;
    eps_ = phase_step(phase_);
    last_success_ = a_;
    skip_too_narrow_phases();
}

void NoisyCautiousSearch::skip_too_narrow_phases() {
    // A phase whose step does not fit in (a, b) runs no macrostep at all.
    while (phase_ <= max_phase_ && !(a_ + eps_ < b_)) {
        ++phase_;
        n_ = 1;
        eps_ = phase_step(phase_);
    }
}

NoisyCautiousSearch::MacrostepResult NoisyCautiousSearch::run_macrostep(SaleFeed& feed,
                                                                        TraceRecorder& rec,
                                                                        long long max_rounds) {
    MacrostepResult res;
    res.price = next_price();
    const long long rounds = std::min(macro_len_, max_rounds);
    if (rounds <= 0) return res;

    long long accepted = 0;
    for (long long r = 0; r < rounds; ++r) {
        const bool sale = feed.offer(res.price);
        rec.record(res.price, sale ? 1.0 : 0.0);
        if (sale) ++accepted;
        if (r == 0) res.first_offer_accepted = sale;
    }
    res.rounds = rounds;
    if (rounds < macro_len_) return res;  // truncated: no bracket update
    ++macrosteps_;

    if (finished()) {
        res.success = true;  // pinned price, nothing to update
        return res;
    }

    res.success = (opts_.target == 1) ? (accepted == rounds) : (accepted > 0);
    if (res.success) {
        last_success_ = res.price;
        ++n_;
        if (!(a_ + static_cast<double>(n_) * eps_ < b_)) {
            advance_phase(last_success_, b_);  // exhausted the interval
        }
    } else {
        advance_phase(last_success_, res.price);  // overshoot bracket
    }
    return res;
}

SearchEstimationResult capped_on_search(NoisyCautiousSearch& search, SaleFeed& feed,
                                        TraceRecorder& rec, double theta, double log_conf,
                                        bool complement, long long round_budget) {
    BernsteinEstimator est({1.0, log_conf, theta, complement});
    SearchEstimationResult out;
    long long spent = 0;
    long long target_macrosteps = -1;  // set once the estimator stops

    while (spent < round_budget) {
        if (target_macrosteps >= 0 && search.macrosteps_done() >= target_macrosteps) break;
        if (target_macrosteps < 0 &&
            est.status() != BernsteinEstimator::Status::kContinue) {
            if (est.status() == BernsteinEstimator::Status::kReady) {
                out.estimate_ready = true;
                out.p_hat = est.estimate();
                target_macrosteps = static_cast<long long>(std::ceil(6.0 / out.p_hat));
                continue;
            }
            break;  // below threshold: caller interprets
        }
        auto step = search.run_macrostep(feed, rec, round_budget - spent);
        spent += step.rounds;
        if (step.rounds < search.macrostep_length()) {
            out.budget_exhausted = true;
            break;
        }
        if (step.success && target_macrosteps < 0) {
            est.feed(step.first_offer_accepted ? 1.0 : 0.0);
        }
    }
    if (spent >= round_budget && !out.estimate_ready) out.budget_exhausted = true;
    out.macrosteps = search.macrosteps_done();
    out.v_hat = search.last_successful_price();
    return out;
}

}  // namespace pricer
