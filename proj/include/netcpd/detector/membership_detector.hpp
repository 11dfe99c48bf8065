#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "netcpd/detector/rate_detector.hpp"

namespace netcpd {

/// Jensen-Shannon changepoint detector for one node's membership probabilities.
/// The logged JS stream is tested with the MAD rule. A change entering at step
/// s qualifies when the argmax at s differs from each of the previous lag
/// argmaxes and those were all equal; it is flagged once lag consecutive
/// outliers starting at s have been seen with the new argmax held throughout
/// (so at s + lag - 1). The window
/// freezes while outliers continue and takes the current snapshot after a
/// flag or after `window` consecutive outliers; it is never reset.
class MembershipDetector {
public:
    explicit MembershipDetector(DetectorConfig config);

    DetectorOutcome observe(std::size_t step, std::span<const double> tau);

private:
    double logged_js(std::span<const double> a, std::span<const double> b) const;

    DetectorConfig config_;
    std::deque<std::vector<double>> window_;
    std::deque<std::size_t> argmax_history_; // most recent last, at most lag entries
    std::deque<bool> qualifies_;             // argmax conditions of the last lag steps, most recent last
    std::size_t outliers_ = 0;
    std::size_t last_step_ = 0;
};

} // namespace netcpd
