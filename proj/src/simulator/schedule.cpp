#include "netcpd/simulator/schedule.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netcpd/core/errors.hpp"

namespace netcpd {

void ChangeSchedule::validate(double horizon, std::size_t nodes, std::size_t groups) const {
    for (const auto& c : rate_changes) {
        if (!(c.time > 0.0 && c.time < horizon)) {
            throw ConfigError("schedule.rate_changes.time",
                              "change at t=" + std::to_string(c.time) + " not strictly inside (0, horizon)");
        }
        if (c.from_group >= groups || c.to_group >= groups) {
            throw ConfigError("schedule.rate_changes.block", "group index out of range");
        }
        if (!(std::isfinite(c.rate) && c.rate > 0.0)) {
            throw ConfigError("schedule.rate_changes.rate", "new rate must be positive");
        }
    }
    for (const auto& c : membership_changes) {
        if (!(c.time > 0.0 && c.time < horizon)) {
            throw ConfigError("schedule.membership_changes.time",
                              "change at t=" + std::to_string(c.time) + " not strictly inside (0, horizon)");
        }
        if (c.target >= groups) {
            throw ConfigError("schedule.membership_changes.target", "target group out of range");
        }
        for (std::size_t i : c.nodes) {
            if (i >= nodes) {
                throw ConfigError("schedule.membership_changes.nodes", "node index out of range");
            }
        }
    }
}

std::vector<double> ChangeSchedule::breakpoints() const {
    std::vector<double> out;
    for (const auto& c : rate_changes) {
        out.push_back(c.time);
    }
    for (const auto& c : membership_changes) {
        out.push_back(c.time);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

template <typename Change>
std::vector<std::size_t> order_by_time(const std::vector<Change>& changes) {
    std::vector<std::size_t> order(changes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return changes[a].time < changes[b].time; });
    return order;
}

} // namespace

StepFunction<std::vector<std::size_t>> membership_path(const std::vector<std::size_t>& initial,
                                                       const ChangeSchedule& schedule) {
    StepFunction<std::vector<std::size_t>> path{{0.0}, {initial}};
    for (std::size_t idx : order_by_time(schedule.membership_changes)) {
        const auto& c = schedule.membership_changes[idx];
        if (path.times.back() != c.time) {
            path.times.push_back(c.time);
            path.values.push_back(path.values.back());
        }
        for (std::size_t i : c.nodes) {
            path.values.back()[i] = c.target;
        }
    }
    return path;
}

StepFunction<Matrix> rate_path(const Matrix& initial, const ChangeSchedule& schedule) {
    StepFunction<Matrix> path{{0.0}, {initial}};
    for (std::size_t idx : order_by_time(schedule.rate_changes)) {
        const auto& c = schedule.rate_changes[idx];
        if (path.times.back() != c.time) {
            path.times.push_back(c.time);
            path.values.push_back(path.values.back());
        }
        path.values.back()(c.from_group, c.to_group) = c.rate;
    }
    return path;
}

} // namespace netcpd
