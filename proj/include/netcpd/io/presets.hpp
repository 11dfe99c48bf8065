#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netcpd/core/model.hpp"
#include "netcpd/detector/rate_detector.hpp"
#include "netcpd/io/run_config.hpp"

namespace netcpd {

/// Rate matrix shared by the simulation experiments.
Matrix baseline_rates();

/// A fully specified simulation experiment plus the inference and detector
/// settings it is evaluated with.
struct Scenario {
    std::string name;
    SimulationSettings simulation;
    Variant variant = Variant::bhpp;
    ModelConfig model;
    DetectorConfig detector;
};

/// Recognised names: fig3, swap-P, merge-create-P, rate-gap-M, sparsity-RHO,
/// sinusoidal, santander (detector and batching settings only; no simulation).
/// `nodes` overrides the experiment's network size when set. Memberships are
/// drawn with `seed`, and the nodes that move are the first members (by index)
/// of the source group. Throws ConfigError for unknown names.
Scenario make_scenario(std::string_view name, std::optional<std::size_t> nodes, std::uint64_t seed);

/// Replaces the model, detector, variant and simulation of `config` by the
/// preset's, using `config.seed` and `config.model.nodes` (when non-zero).
/// The santander preset also sets first-appearance node ids, the window
/// origin 2019-01-02 and an 80-week horizon.
void apply_preset(RunConfig& config, std::string_view name);

/// Every preset family with its default parameter, for help output.
std::vector<std::string> preset_names();

} // namespace netcpd
