#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "netcpd/core/matrix.hpp"

namespace netcpd {

/// Block (from, to) switches to `rate` for all t > time.
struct RateChange {
    double time = 0.0;
    std::size_t from_group = 0;
    std::size_t to_group = 0;
    double rate = 0.0;
};

/// Every listed node moves to `target` for all t > time.
struct MembershipChange {
    double time = 0.0;
    std::vector<std::size_t> nodes;
    std::size_t target = 0;
};

struct ChangeSchedule {
    std::vector<RateChange> rate_changes;
    std::vector<MembershipChange> membership_changes;

    /// Throws ConfigError for times outside (0, horizon), out-of-range groups
    /// or nodes, and non-positive rates.
    void validate(double horizon, std::size_t nodes, std::size_t groups) const;

    /// Sorted, de-duplicated change times.
    std::vector<double> breakpoints() const;
};

/// Piecewise-constant function of time. values[k] holds on (times[k], times[k+1]],
/// with times[0] = 0 and values[0] also covering t = 0; the last value extends
/// to infinity. A change scheduled at t' therefore applies for t > t'.
template <typename T>
struct StepFunction {
    std::vector<double> times;
    std::vector<T> values;

    const T& at(double t) const {
        if (values.empty()) {
            throw std::logic_error("StepFunction::at on an empty function");
        }
        auto it = std::lower_bound(times.begin(), times.end(), t);
        const std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
        return values[k];
    }
};

/// Applies the schedule to the initial state, producing truth step functions.
StepFunction<std::vector<std::size_t>> membership_path(const std::vector<std::size_t>& initial,
                                                       const ChangeSchedule& schedule);
StepFunction<Matrix> rate_path(const Matrix& initial, const ChangeSchedule& schedule);

} // namespace netcpd
