#include "netcpd/detector/rate_detector.hpp"

#include <stdexcept>
#include <vector>

#include "netcpd/core/errors.hpp"
#include "netcpd/detector/divergence.hpp"
#include "netcpd/detector/mad.hpp"

namespace netcpd {

void DetectorConfig::validate() const {
    if (lag < 1) {
        throw ConfigError("detector.lag", "must be >= 1");
    }
    if (convergence_burn_in < lag + 1) {
        throw ConfigError("detector.convergence_burn_in", "must be >= lag + 1");
    }
    if (window < lag + 1) {
        throw ConfigError("detector.window", "must be >= lag + 1");
    }
    if (!(rate_threshold > 0.0)) {
        throw ConfigError("detector.rate_threshold", "must be positive");
    }
    if (!(membership_threshold >= 0.0)) {
        throw ConfigError("detector.membership_threshold", "must be non-negative");
    }
    if (!(js_floor > 0.0)) {
        throw ConfigError("detector.js_floor", "must be positive");
    }
}

RateDetector::RateDetector(DetectorConfig config) : config_(config) { config_.validate(); }

DetectorOutcome RateDetector::observe(std::size_t step, GammaParams posterior) {
    if (step != last_step_ + 1) {
        throw std::invalid_argument("RateDetector: steps must be consecutive");
    }
    last_step_ = step;
    DetectorOutcome out;
    if (step <= config_.convergence_burn_in) {
        return out;
    }
    if (window_.size() < config_.window) {
        window_.push_back(posterior);
        return out;
    }

    const std::size_t b2 = config_.window;
    std::vector<double> reference;
    reference.reserve(config_.lag * b2);
    for (std::size_t s = 1; s <= config_.lag; ++s) {
        for (std::size_t l = s; l < b2; ++l) {
            reference.push_back(kl_gamma(window_[l], window_[l - s]));
        }
    }
    const double candidate = kl_gamma(posterior, window_.back());
    const double centre = median(reference);
    out.tested = true;
    out.statistic = std::abs(candidate - centre);
    out.threshold = config_.rate_threshold * median_absolute_deviation(reference);
    out.outlier = out.statistic > out.threshold;

    auto slide = [&] {
        window_.pop_front();
        window_.push_back(posterior);
    };
    if (!out.outlier) {
        outliers_ = 0;
        slide();
        return out;
    }
    if (++outliers_ < config_.lag) {
        return out; // window frozen
    }
    out.flagged = true;
    outliers_ = 0;
    if (config_.reset_after_flag) {
        window_.clear();
    } else {
        slide();
    }
    return out;
}

} // namespace netcpd
