#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "json.hpp"

#include "netcpd/core/edge_set.hpp"
#include "netcpd/inference/engine.hpp"
#include "netcpd/io/run_config.hpp"

namespace netcpd {

// Artifact names inside RunConfig::out_dir.
inline constexpr const char* kRunFile = "run.json";
inline constexpr const char* kEventsFile = "events.csv";
inline constexpr const char* kTruthFile = "truth.json";
inline constexpr const char* kTraceFile = "trace.jsonl";
inline constexpr const char* kMeansFile = "posterior_means.csv";
inline constexpr const char* kNodesFile = "nodes.csv";
inline constexpr const char* kDetectionsFile = "detections.jsonl";
inline constexpr const char* kNodeChangesFile = "node_changes.csv";
inline constexpr const char* kSummaryFile = "summary.json";

/// Builds the engine selected by `config.variant` for `nodes` nodes. The
/// known-graph engines assume the complete graph (self-loops per config).
std::unique_ptr<StreamingEngine> make_engine(const RunConfig& config, std::size_t nodes);

/// Simulates `config.simulation` and writes events.csv, truth.json and run.json
/// (the latter with the realised initial memberships).
void run_simulate(RunConfig& config);

/// Streams the event file through the engine; writes trace.jsonl,
/// posterior_means.csv (means with central 95% gamma bands) and nodes.csv.
/// Returns a short report: node and step counts and the final occupied-group
/// count (diagonal occupancy >= epsilon).
nlohmann::json run_infer(const RunConfig& config);

/// Replays trace.jsonl through the detectors; writes detections.jsonl and
/// node_changes.csv (per-step counts of flagged and argmax-switching nodes).
void run_detect(const RunConfig& config);

/// Scores trace and detections against truth.json; writes and returns summary.json.
nlohmann::json run_eval(const RunConfig& config);

/// simulate (when configured) -> infer -> detect -> eval (when truth exists).
/// With replicates > 1, replicate k runs with seed + k in out_dir/rep-KKK,
/// in parallel, and a pooled summary is written to out_dir.
void run_pipeline(RunConfig config);

} // namespace netcpd
