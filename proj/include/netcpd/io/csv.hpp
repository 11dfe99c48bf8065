#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netcpd/core/event_batch.hpp"

namespace netcpd {

enum class NodePolicy {
    first_appearance, // ids assigned 0, 1, ... in order of first appearance
    numeric,          // ids are the non-negative integers written in the file
};

NodePolicy parse_node_policy(const std::string& name);

/// Stable mapping between external node names and dense integer ids.
class NodeRegistry {
public:
    std::size_t intern(const std::string& name);
    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> ids_;
};

struct IngestOptions {
    NodePolicy policy = NodePolicy::first_appearance;
    double width = 0.0;
    double origin = 0.0;                // timestamps are shifted by -origin
    std::optional<double> horizon;      // default: cover the latest event
    std::optional<std::size_t> nodes;   // numeric policy: force the node count
};

struct IngestResult {
    NodeRegistry registry;
    std::vector<Event> events; // shifted times, sorted
    std::vector<EventBatch> batches;
    double horizon = 0.0;
};

/// Splits one CSV line, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads `source,dest,timestamp` rows. Throws DataError naming the line of a
/// malformed row or unparseable timestamp.
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options);

/// Writes events with numeric node ids and full-precision timestamps.
void write_events_csv(const std::filesystem::path& path, std::span<const Event> events);

} // namespace netcpd
