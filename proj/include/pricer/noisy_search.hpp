#pragma once

#include "pricer/environment.hpp"
#include "pricer/mean_estimation.hpp"
#include "pricer/trace.hpp"

namespace pricer {

// Noisy cautious search for valuation v_i (i = 1 smallest, i = 2 largest)
// given a lower bound gamma_i on p_i.  Each price is offered for
// ceil(ln(delta)/ln(1-gamma_i)) rounds (a macrostep).  For i = 1 a macrostep
// fails iff any offer is rejected; for i = 2 it fails iff no offer is
// accepted.  Phase s uses step 2^(-2^s); a failure at price X brackets
// [last success, X], exhausting the interval keeps b.  After
// ceil(log2 log2 T) phases the last successful price is posted for good.
class NoisyCautiousSearch {
public:
    struct Options {
        int target = 1;       // 1 or 2
        double gamma = 0.5;   // lower bound on p_target
        double log_conf = 1;  // ln(1/delta)
        long long horizon = 2;
    };

    explicit NoisyCautiousSearch(const Options& opts);

    long long macrostep_length() const { return macro_len_; }
    int max_phase() const { return max_phase_; }
    bool finished() const { return phase_ > max_phase_; }

    // Price of the next macrostep (the pinned anchor once finished).
    double next_price() const;

    struct MacrostepResult {
        double price = 0.0;
        bool success = false;
        bool first_offer_accepted = false;
        long long rounds = 0;
    };

    // Runs one macrostep (at most max_rounds offers).  A truncated macrostep
    // posts its price but performs no bracket update.
    MacrostepResult run_macrostep(SaleFeed& feed, TraceRecorder& rec, long long max_rounds);

    double lower() const { return a_; }
    double upper() const { return b_; }
    double last_successful_price() const { return last_success_; }
    long long macrosteps_done() const { return macrosteps_; }
    int phase() const { return phase_; }

private:
    void advance_phase(double new_a, double new_b);
    void skip_too_narrow_phases();

    Options opts_;
    long long macro_len_;
    int max_phase_;
    double a_ = 0.0;
    double b_ = 1.0;
    int phase_ = 0;
    long long n_ = 1;
    double eps_ = 0.5;  // 2^(-2^phase)
    double last_success_ = 0.0;
    long long macrosteps_ = 0;
};

// Capped mean estimation coupled to a noisy cautious search: one sample (the
// first offer's outcome) is taken per successful macrostep; once the
// estimator stops, the search continues to ceil(6/p_hat) macrosteps total
// and the last successful price is returned alongside p_hat.
struct SearchEstimationResult {
    bool estimate_ready = false;
    double p_hat = 0.0;
    double v_hat = 0.0;
    long long macrosteps = 0;
    bool budget_exhausted = false;
};

SearchEstimationResult capped_on_search(NoisyCautiousSearch& search, SaleFeed& feed,
                                        TraceRecorder& rec, double theta, double log_conf,
                                        bool complement, long long round_budget);

}  // namespace pricer
