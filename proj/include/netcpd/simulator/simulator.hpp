#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netcpd/core/event_batch.hpp"
#include "netcpd/core/matrix.hpp"
#include "netcpd/simulator/schedule.hpp"

namespace netcpd {

struct SimulationConfig {
    std::size_t nodes = 0;
    std::size_t groups = 0;
    Matrix rates;                         // initial K x K block rates
    std::vector<double> proportions;      // used to draw labels when `memberships` is empty
    std::vector<std::size_t> memberships; // explicit initial labels (optional)
    Matrix adjacency;                     // N x N 0/1; empty means complete graph
    bool self_loops = true;               // only consulted for the complete graph
};

struct SimOutput {
    std::vector<Event> events; // sorted by (time, source, dest)
    StepFunction<std::vector<std::size_t>> true_memberships;
    StepFunction<Matrix> true_rates;
    Matrix adjacency;
    double horizon = 0.0;
};

/// I.i.d. categorical labels. Throws ConfigError unless `proportions` is a
/// probability vector.
std::vector<std::size_t> sample_memberships(std::size_t nodes, std::span<const double> proportions,
                                            std::uint64_t seed);

/// Independent Bernoulli(rho(z_i, z_j)) edges over all ordered pairs, diagonal included.
Matrix sample_sbm_adjacency(std::span<const std::size_t> connection_groups, const Matrix& rho,
                            std::uint64_t seed);

/// Simulates every edge as a piecewise-homogeneous Poisson process on [0, horizon].
/// Each constant-rate segment is sampled independently; edges use independent
/// streams derived from `seed`, so output does not depend on the thread count.
SimOutput simulate(const SimulationConfig& config, const ChangeSchedule& schedule, double horizon,
                   std::uint64_t seed);

} // namespace netcpd
