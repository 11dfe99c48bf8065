#pragma once

#include <cstddef>
#include <vector>

#include "netcpd/core/matrix.hpp"
#include "netcpd/core/model.hpp"
#include "netcpd/detector/membership_detector.hpp"
#include "netcpd/detector/rate_detector.hpp"

namespace netcpd {

enum class DetectionKind { rate, membership };

/// One tested observation; `to_group` is unused for membership records and
/// `from_group` then holds the node index.
struct DetectionLogEntry {
    std::size_t step = 0;
    DetectionKind kind = DetectionKind::rate;
    std::size_t from_group = 0;
    std::size_t to_group = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    bool flagged = false;
};

/// Independent detectors for every block rate and every node.
class NetworkDetector {
public:
    NetworkDetector(DetectorConfig config, std::size_t groups, std::size_t nodes, bool watch_memberships = true);

    /// Feeds the posterior of update `step`; returns the tested observations.
    std::vector<DetectionLogEntry> observe(std::size_t step, const RatePosterior& rates, const Matrix& tau);

private:
    std::size_t groups_;
    std::vector<RateDetector> rate_;
    std::vector<MembershipDetector> membership_;
};

} // namespace netcpd
