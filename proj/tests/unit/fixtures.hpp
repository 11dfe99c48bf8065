#pragma once

#include <cstdint>
#include <vector>

#include "netcpd/core/event_batch.hpp"
#include "netcpd/core/model.hpp"
#include "netcpd/simulator/simulator.hpp"

// Small simulated streams shared by the unit tests.
struct Stream {
    netcpd::SimOutput sim;
    std::vector<netcpd::EventBatch> batches;
};

inline Stream two_group_stream(std::size_t nodes, double horizon, std::uint64_t seed,
                               const netcpd::ChangeSchedule& schedule = {}, double width = 0.1) {
    netcpd::SimulationConfig c;
    c.nodes = nodes;
    c.groups = 2;
    c.rates = netcpd::Matrix{{2, 1}, {0.3, 8}};
    c.proportions = {0.6, 0.4};
    Stream s;
    s.sim = netcpd::simulate(c, schedule, horizon, seed);
    s.batches = netcpd::batch_events(s.sim.events, nodes, width, horizon);
    return s;
}

inline netcpd::ModelConfig model_config(std::size_t nodes, std::size_t groups, double forgetting) {
    netcpd::ModelConfig c;
    c.nodes = nodes;
    c.groups = groups;
    c.interval = 0.1;
    c.forgetting = {forgetting, forgetting, forgetting, forgetting};
    return c;
}

inline netcpd::Matrix one_hot(const std::vector<std::size_t>& labels, std::size_t groups) {
    netcpd::Matrix t(labels.size(), groups, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        t(i, labels[i]) = 1.0;
    }
    return t;
}
