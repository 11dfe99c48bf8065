#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "netcpd/core/model.hpp"
#include "netcpd/detector/rate_detector.hpp"
#include "netcpd/io/csv.hpp"
#include "netcpd/simulator/simulator.hpp"

namespace netcpd {

enum class Variant { bhpp, sbm, gem };

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

/// What to simulate when the pipeline generates its own data.
struct SimulationSettings {
    SimulationConfig config;
    ChangeSchedule schedule;
    double horizon = 0.0;
    /// Connection probability for a single-connection-group random graph,
    /// sampled at simulation time when no adjacency is given.
    std::optional<double> rho;
};

struct RunConfig {
    ModelConfig model;
    DetectorConfig detector;
    Variant variant = Variant::bhpp;
    std::uint64_t seed = 0;
    bool watch_memberships = true;

    std::optional<std::string> preset;
    std::optional<SimulationSettings> simulation;

    std::filesystem::path input;            // event CSV; empty means <out_dir>/events.csv
    std::filesystem::path out_dir = "out";
    NodePolicy node_policy = NodePolicy::numeric;
    double origin = 0.0;
    std::optional<double> horizon;
    bool self_loops = true; // edge set assumed by the known-graph engines
    std::size_t replicates = 1;

    /// Checks model and detector invariants plus the variant-specific fields.
    /// Throws ConfigError.
    void validate() const;
};

/// Overlays the keys present in `j` onto `config`. Unknown keys are rejected.
void apply_json(RunConfig& config, const nlohmann::json& j);

/// Reads a JSON run configuration. TOML is not supported.
RunConfig load_run_config(const std::filesystem::path& path);

/// Serialises the fields apply_json understands (round-trips through it).
nlohmann::json to_json(const RunConfig& config);

} // namespace netcpd
