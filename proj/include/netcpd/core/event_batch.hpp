#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace netcpd {

/// One directed interaction (source -> dest) at time `time`.
struct Event {
    std::size_t source = 0;
    std::size_t dest = 0;
    double time = 0.0;

    bool operator==(const Event&) const = default;
};

/// Aggregated edge counts x_ij over the interval ((r-1) width, r width].
/// Stored sparsely: rows by source (out-edges) and a transposed copy by
/// destination (in-edges), both sorted by the other endpoint.
class EventBatch {
public:
    struct Entry {
        std::size_t node;
        std::uint32_t count;
        bool operator==(const Entry&) const = default;
    };

    EventBatch() = default;
    EventBatch(std::size_t nodes, std::size_t index, double width);

    /// Builds a batch from unsorted (source, dest) pairs, one per event.
    static EventBatch from_pairs(std::size_t nodes, std::size_t index, double width,
                                 std::span<const std::pair<std::size_t, std::size_t>> pairs);

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t index() const noexcept { return index_; }
    double width() const noexcept { return width_; }

    std::span<const Entry> out_edges(std::size_t i) const;
    std::span<const Entry> in_edges(std::size_t j) const;
    std::uint32_t count(std::size_t i, std::size_t j) const;
    std::uint64_t total() const noexcept { return total_; }
    std::size_t nonzeros() const noexcept { return out_.size(); }

    bool operator==(const EventBatch&) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t index_ = 0;
    double width_ = 0.0;
    std::uint64_t total_ = 0;
    std::vector<std::size_t> out_ptr_;
    std::vector<Entry> out_;
    std::vector<std::size_t> in_ptr_;
    std::vector<Entry> in_;
};

/// 1-based index r of the batch (L_{r-1}, L_r] holding time t, with
/// L_r = r * width evaluated in double precision. t = 0 maps to batch 1.
std::size_t batch_index(double t, double width);

/// First update whose batch contains times after `t`: the r with
/// L_{r-1} <= t < L_r. Times within 1e-9 (relative) of a boundary are snapped
/// to it, so a change scheduled exactly at r * width first shows up in r + 1.
std::size_t step_after(double t, double width);

/// Time at which the truth is read for update r: just left of L_r, so that a
/// change scheduled exactly at L_r (effective for t > L_r) is not yet visible.
double truth_time(std::size_t step, double width);

/// Number of batches needed to cover (0, horizon].
std::size_t batch_count(double horizon, double width);

/// Aggregates events into consecutive batches covering (0, horizon].
/// Throws DataError for events outside [0, horizon] or node ids >= nodes.
std::vector<EventBatch> batch_events(std::span<const Event> events, std::size_t nodes, double width,
                                     double horizon);

} // namespace netcpd
