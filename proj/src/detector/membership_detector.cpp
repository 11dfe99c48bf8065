#include "netcpd/detector/membership_detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netcpd/detector/divergence.hpp"
#include "netcpd/detector/mad.hpp"

namespace netcpd {

MembershipDetector::MembershipDetector(DetectorConfig config) : config_(config) { config_.validate(); }

double MembershipDetector::logged_js(std::span<const double> a, std::span<const double> b) const {
    return std::log(js_categorical(a, b) + config_.js_floor);
}

DetectorOutcome MembershipDetector::observe(std::size_t step, std::span<const double> tau) {
    if (step != last_step_ + 1) {
        throw std::invalid_argument("MembershipDetector: steps must be consecutive");
    }
    last_step_ = step;
    const auto current = static_cast<std::size_t>(std::max_element(tau.begin(), tau.end()) - tau.begin());
    auto remember = [&] {
        argmax_history_.push_back(current);
        if (argmax_history_.size() > config_.lag) {
            argmax_history_.pop_front();
        }
    };

    DetectorOutcome out;
    if (step <= config_.convergence_burn_in) {
        remember();
        return out;
    }
    if (window_.size() < config_.window) {
        window_.emplace_back(tau.begin(), tau.end());
        remember();
        return out;
    }

    const std::size_t b2 = config_.window;
    std::vector<double> reference;
    for (std::size_t s = 1; s <= config_.lag; ++s) {
        for (std::size_t l = s; l < b2; ++l) {
            reference.push_back(logged_js(window_[l], window_[l - s]));
        }
    }
    const double candidate = logged_js(tau, window_.back());
    const double centre = median(reference);
    out.tested = true;
    out.statistic = std::abs(candidate - centre);
    out.threshold = config_.membership_threshold * median_absolute_deviation(reference);
    out.outlier = out.statistic > out.threshold;

    const bool moved = std::none_of(argmax_history_.begin(), argmax_history_.end(),
                                    [&](std::size_t a) { return a == current; });
    const bool settled =
        std::all_of(argmax_history_.begin(), argmax_history_.end(),
                    [&](std::size_t a) { return a == argmax_history_.front(); });
    qualifies_.push_back(moved && settled && argmax_history_.size() == config_.lag);
    if (qualifies_.size() > config_.lag) {
        qualifies_.pop_front();
    }
    remember();
    // The new argmax must also have held over the whole run.
    const bool held = std::all_of(argmax_history_.begin(), argmax_history_.end(),
                                  [&](std::size_t a) { return a == current; });

    auto slide = [&] {
        window_.pop_front();
        window_.emplace_back(tau.begin(), tau.end());
    };
    if (!out.outlier) {
        outliers_ = 0;
        slide();
        return out;
    }
    ++outliers_;
    // The latest lag steps are all outliers; the change would have entered at the oldest of them.
    out.flagged = outliers_ >= config_.lag && qualifies_.size() == config_.lag && qualifies_.front() && held;
    if (out.flagged || outliers_ >= config_.window) {
        outliers_ = 0;
        slide();
    }
    return out; // otherwise the window stays frozen
}

} // namespace netcpd
