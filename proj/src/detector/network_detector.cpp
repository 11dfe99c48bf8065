#include "netcpd/detector/network_detector.hpp"

#include <stdexcept>

namespace netcpd {

NetworkDetector::NetworkDetector(DetectorConfig config, std::size_t groups, std::size_t nodes,
                                 bool watch_memberships)
    : groups_(groups) {
    config.validate();
    rate_.assign(groups * groups, RateDetector(config));
    if (watch_memberships) {
        membership_.assign(nodes, MembershipDetector(config));
    }
}

std::vector<DetectionLogEntry> NetworkDetector::observe(std::size_t step, const RatePosterior& rates,
                                                        const Matrix& tau) {
    if (rates.groups() != groups_) {
        throw std::invalid_argument("NetworkDetector: group count changed");
    }
    std::vector<DetectionLogEntry> log;
    for (std::size_t k = 0; k < groups_; ++k) {
        for (std::size_t m = 0; m < groups_; ++m) {
            const auto o = rate_[k * groups_ + m].observe(step, rates.block(k, m));
            if (o.tested) {
                log.push_back({step, DetectionKind::rate, k, m, o.statistic, o.threshold, o.flagged});
            }
        }
    }
    for (std::size_t i = 0; i < membership_.size(); ++i) {
        const auto o = membership_[i].observe(step, tau.row(i));
        if (o.tested) {
            log.push_back({step, DetectionKind::membership, i, 0, o.statistic, o.threshold, o.flagged});
        }
    }
    return log;
}

} // namespace netcpd
