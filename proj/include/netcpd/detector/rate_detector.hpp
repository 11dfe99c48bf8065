#pragma once

#include <cstddef>
#include <deque>

#include "netcpd/core/model.hpp"

namespace netcpd {

struct DetectorConfig {
    std::size_t convergence_burn_in = 10; // B1: steps discarded
    std::size_t window = 10;              // B2: snapshots per comparison window
    std::size_t lag = 2;                  // kappa
    double rate_threshold = 10.0;         // W_KL
    double membership_threshold = 2.0;    // W_JS; 0 reduces the membership test to the argmax guards
    double js_floor = 1e-12;
    bool reset_after_flag = true; // refill the rate window for B2 steps after a flag

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Outcome of feeding one posterior snapshot to a detector.
struct DetectorOutcome {
    bool tested = false;
    bool outlier = false;
    bool flagged = false;
    double statistic = 0.0; // |candidate - median|
    double threshold = 0.0; // W * MAD
};

/// Gamma-KL changepoint detector for one block rate.
class RateDetector {
public:
    explicit RateDetector(DetectorConfig config);

    /// `step` is the 1-based update index of `posterior`; calls must be consecutive.
    DetectorOutcome observe(std::size_t step, GammaParams posterior);

    std::size_t consecutive_outliers() const noexcept { return outliers_; }
    std::size_t window_size() const noexcept { return window_.size(); }

private:
    DetectorConfig config_;
    std::deque<GammaParams> window_;
    std::size_t outliers_ = 0;
    std::size_t last_step_ = 0;
};

} // namespace netcpd
