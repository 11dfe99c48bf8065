#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "netcpd/core/matrix.hpp"
#include "netcpd/simulator/schedule.hpp"

namespace netcpd {

/// Adjusted Rand index between two labelings of the same nodes.
double ari(std::span<const std::size_t> labels_a, std::span<const std::size_t> labels_b);

/// A scripted change (time, target) and a flag raised at an update (step, target).
/// Targets are opaque ids: a block index k * K + m, or a node index.
struct TrueChange {
    double time = 0.0;
    std::size_t target = 0;
};
struct Flag {
    std::size_t step = 0;
    std::size_t target = 0;
};

struct DetectionRecord {
    std::vector<TrueChange> true_changes;
    std::vector<Flag> flagged;
    double interval = 0.0; // batch width, converts steps to times
};

struct DetectionScore {
    std::size_t changes = 0;    // C
    std::size_t detections = 0; // D
    std::size_t correct = 0;    // T
    double ccd() const { return changes == 0 ? 0.0 : static_cast<double>(correct) / changes; }
    double dnf() const { return detections == 0 ? 1.0 : static_cast<double>(correct) / detections; }
};

struct DetectionSummary {
    DetectionScore pooled;
    std::map<std::size_t, DetectionScore> per_target;
};

/// For each target, the first flag after a true change and before the next one
/// detects it; every other flag is false. A flag at update r covers data up to
/// r * interval, so it can only respond to changes strictly before that.
DetectionSummary ccd_dnf(const DetectionRecord& record);

/// Mean of a piecewise-constant rate matrix over the batch ((r-1) width, r width].
Matrix batch_average_rates(const StepFunction<Matrix>& truth, std::size_t step, double width);

/// Per-block RMSE of posterior means (one matrix per update, update r at index r-1)
/// against the batch-averaged truth, skipping the first `burn_in` updates.
/// `mapping[a]` is the truth label of estimated label a; estimated blocks with a
/// label outside the truth range are reported as NaN.
Matrix rate_rmse(std::span<const Matrix> posterior_means, const StepFunction<Matrix>& truth, double width,
                 std::size_t burn_in, std::span<const std::size_t> mapping);

} // namespace netcpd
