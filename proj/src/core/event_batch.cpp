#include "netcpd/core/event_batch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcpd/core/errors.hpp"

namespace netcpd {

EventBatch::EventBatch(std::size_t nodes, std::size_t index, double width)
    : nodes_(nodes), index_(index), width_(width), out_ptr_(nodes + 1, 0), in_ptr_(nodes + 1, 0) {}

EventBatch EventBatch::from_pairs(std::size_t nodes, std::size_t index, double width,
                                  std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    EventBatch b(nodes, index, width);
    std::vector<std::pair<std::size_t, std::size_t>> sorted(pairs.begin(), pairs.end());
    for (const auto& [i, j] : sorted) {
        if (i >= nodes || j >= nodes) {
            throw DataError("event (" + std::to_string(i) + ", " + std::to_string(j) + ") references node >= " +
                            std::to_string(nodes));
        }
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t p = 0; p < sorted.size();) {
        std::size_t q = p;
        while (q < sorted.size() && sorted[q] == sorted[p]) {
            ++q;
        }
        b.out_.push_back({sorted[p].second, static_cast<std::uint32_t>(q - p)});
        ++b.out_ptr_[sorted[p].first + 1];
        ++b.in_ptr_[sorted[p].second + 1];
        p = q;
    }
    b.total_ = sorted.size();
    for (std::size_t i = 0; i < nodes; ++i) {
        b.out_ptr_[i + 1] += b.out_ptr_[i];
        b.in_ptr_[i + 1] += b.in_ptr_[i];
    }
    // Transpose: walking sources in increasing order keeps each in-list sorted.
    b.in_.resize(b.out_.size());
    std::vector<std::size_t> fill(b.in_ptr_.begin(), b.in_ptr_.end() - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t e = b.out_ptr_[i]; e < b.out_ptr_[i + 1]; ++e) {
            const auto& entry = b.out_[e];
            b.in_[fill[entry.node]++] = {i, entry.count};
        }
    }
    return b;
}

std::span<const EventBatch::Entry> EventBatch::out_edges(std::size_t i) const {
    return {out_.data() + out_ptr_[i], out_ptr_[i + 1] - out_ptr_[i]};
}

std::span<const EventBatch::Entry> EventBatch::in_edges(std::size_t j) const {
    return {in_.data() + in_ptr_[j], in_ptr_[j + 1] - in_ptr_[j]};
}

std::uint32_t EventBatch::count(std::size_t i, std::size_t j) const {
    auto row = out_edges(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t v) { return e.node < v; });
    return (it != row.end() && it->node == j) ? it->count : 0;
}

std::size_t batch_index(double t, double width) {
    if (t <= 0.0) {
        return 1;
    }
    auto r = static_cast<std::size_t>(std::ceil(t / width));
    // Division can land one off the interval defined by the products r * width.
    while (r > 1 && static_cast<double>(r - 1) * width >= t) {
        --r;
    }
    while (static_cast<double>(r) * width < t) {
        ++r;
    }
    return std::max<std::size_t>(r, 1);
}

std::size_t step_after(double t, double width) {
    if (t < 0.0) {
        return 1;
    }
    const double nearest = std::round(t / width);
    if (std::abs(nearest * width - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
        return static_cast<std::size_t>(nearest) + 1;
    }
    return t == 0.0 ? 1 : batch_index(t, width);
}

double truth_time(std::size_t step, double width) { return (static_cast<double>(step) - 1e-6) * width; }

std::size_t batch_count(double horizon, double width) { return horizon <= 0.0 ? 0 : batch_index(horizon, width); }

std::vector<EventBatch> batch_events(std::span<const Event> events, std::size_t nodes, double width,
                                     double horizon) {
    if (!(width > 0.0)) {
        throw ConfigError("interval", "batch width must be positive");
    }
    const std::size_t count = batch_count(horizon, width);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> buckets(count);
    for (const Event& e : events) {
        if (!(e.time >= 0.0) || e.time > horizon) {
            throw DataError("event at t=" + std::to_string(e.time) + " outside [0, " + std::to_string(horizon) + "]");
        }
        buckets[batch_index(e.time, width) - 1].emplace_back(e.source, e.dest);
    }
    std::vector<EventBatch> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        out.push_back(EventBatch::from_pairs(nodes, r + 1, width, buckets[r]));
    }
    return out;
}

} // namespace netcpd
