#include "netcpd/io/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/parallel.hpp"
#include "netcpd/io/duration.hpp"

namespace netcpd {

Matrix baseline_rates() { return Matrix{{2.0, 1.0}, {0.3, 8.0}}; }

std::vector<std::string> preset_names() {
    return {"fig3", "swap-25", "merge-create-25", "rate-gap-10", "sparsity-0.05", "sinusoidal", "santander"};
}

namespace {

double parse_parameter(std::string_view name, std::string_view prefix) {
    const std::string text(name.substr(prefix.size()));
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("preset", "cannot read the parameter of '" + std::string(name) + "'");
}

Scenario base(std::string_view name, std::size_t nodes, std::uint64_t seed, std::vector<double> proportions,
              Matrix rates, double horizon) {
    Scenario s;
    s.name = std::string(name);
    s.simulation.horizon = horizon;
    SimulationConfig& sim = s.simulation.config;
    sim.nodes = nodes;
    sim.groups = proportions.size();
    sim.rates = std::move(rates);
    sim.memberships = sample_memberships(nodes, proportions, seed);
    sim.proportions = std::move(proportions);
    s.model.nodes = nodes;
    s.model.groups = sim.groups;
    s.model.interval = 0.1;
    s.model.forgetting = {0.1, 1.0, 0.1, 0.1}; // membership tempering off: it also weakens the stick prior
    return s;
}

std::vector<std::size_t> members(const std::vector<std::size_t>& labels, std::size_t group) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == group) {
            out.push_back(i);
        }
    }
    return out;
}

// The first round(percent% of |group|) members of `group`.
std::vector<std::size_t> leading_share(const std::vector<std::size_t>& labels, std::size_t group, double percent) {
    auto all = members(labels, group);
    const auto count = static_cast<std::size_t>(std::llround(percent / 100.0 * static_cast<double>(all.size())));
    all.resize(std::min(count, all.size()));
    return all;
}

void require_percent(double p, std::string_view name) {
    if (!(p >= 0.0 && p <= 100.0)) {
        throw ConfigError("preset", "percentage out of range in '" + std::string(name) + "'");
    }
}

} // namespace

Scenario make_scenario(std::string_view name, std::optional<std::size_t> nodes, std::uint64_t seed) {
    using namespace std::string_view_literals;
    if (name == "fig3") {
        Scenario s = base(name, nodes.value_or(500), seed, {0.6, 0.4}, baseline_rates(), 5.0);
        s.simulation.schedule.rate_changes.push_back({1.0, 0, 0, 5.0});
        return s;
    }
    if (name.starts_with("swap-")) {
        const double p = parse_parameter(name, "swap-"sv);
        require_percent(p, name);
        Scenario s = base(name, nodes.value_or(500), seed, {0.6, 0.4}, baseline_rates(), 5.0);
        s.simulation.schedule.membership_changes.push_back(
            {3.0, leading_share(s.simulation.config.memberships, 0, p), 1});
        return s;
    }
    if (name.starts_with("merge-create-")) {
        const double p = parse_parameter(name, "merge-create-"sv);
        require_percent(p, name);
        Scenario s = base(name, nodes.value_or(500), seed, {0.6, 0.4}, baseline_rates(), 5.0);
        const auto& labels = s.simulation.config.memberships;
        s.simulation.schedule.membership_changes.push_back({2.5, members(labels, 1), 0});
        // After the merge every node sits in group 1; P% of them stay and the rest form group 2.
        std::vector<std::size_t> leaving;
        const auto stay = static_cast<std::size_t>(std::llround(p / 100.0 * static_cast<double>(labels.size())));
        for (std::size_t i = stay; i < labels.size(); ++i) {
            leaving.push_back(i);
        }
        s.simulation.schedule.membership_changes.push_back({3.5, leaving, 1});
        s.variant = Variant::gem;
        s.model.truncation = 6;
        s.detector.membership_threshold = 0.0;
        return s;
    }
    if (name.starts_with("rate-gap-")) {
        const double m = parse_parameter(name, "rate-gap-"sv);
        if (!(m >= 1.0) || m != std::floor(m)) {
            throw ConfigError("preset", "rate-gap needs a positive integer step count");
        }
        Scenario s = base(name, nodes.value_or(500), seed, {0.6, 0.4}, baseline_rates(), 5.0);
        s.simulation.schedule.rate_changes.push_back({3.0, 0, 0, 5.0});
        s.simulation.schedule.rate_changes.push_back({3.0 + 0.1 * m, 0, 0, 3.0});
        s.detector.reset_after_flag = false;
        return s;
    }
    if (name.starts_with("sparsity-")) {
        const double rho = parse_parameter(name, "sparsity-"sv);
        if (!(rho > 0.0 && rho <= 1.0)) {
            throw ConfigError("preset", "sparsity needs a connection probability in (0, 1]");
        }
        Scenario s = base(name, nodes.value_or(500), seed, {0.6, 0.4}, baseline_rates(), 25.0);
        const std::vector<std::size_t> connection(s.simulation.config.nodes, 0);
        s.simulation.config.adjacency =
            sample_sbm_adjacency(connection, Matrix(1, 1, rho), split_seed(seed, 0x73707273ULL));
        s.simulation.rho = rho;
        s.simulation.schedule.membership_changes.push_back(
            {10.0, leading_share(s.simulation.config.memberships, 0, 25.0), 1});
        s.variant = Variant::sbm;
        s.model.connection_groups = 1;
        return s;
    }
    if (name == "sinusoidal") {
        const double horizon = 10.0;
        auto rates_at = [](double t) {
            const double sn = std::sin(2.0 * std::numbers::pi * t / 5.0);
            const double cs = std::cos(2.0 * std::numbers::pi * t / 5.0);
            return Matrix{{2 * sn + 5, 0.1 * sn + 0.2, 0.05 * sn + 0.1},
                          {0.2 * cs + 1, cs + 2, 0.01 * sn + 0.8},
                          {0.1 * cs + 0.9, 0.1 * sn + 0.5, 0.01 * cs + 0.03}};
        };
        // Piecewise-constant approximation: segments of width interval / 10,
        // each holding the rate at its midpoint.
        const double segment = 0.01;
        Scenario s = base(name, nodes.value_or(500), seed, {0.4, 0.4, 0.2}, rates_at(0.5 * segment), horizon);
        const auto count = static_cast<std::size_t>(std::llround(horizon / segment));
        for (std::size_t q = 1; q < count; ++q) {
            const Matrix r = rates_at((static_cast<double>(q) + 0.5) * segment);
            for (std::size_t k = 0; k < 3; ++k) {
                for (std::size_t m = 0; m < 3; ++m) {
                    s.simulation.schedule.rate_changes.push_back({static_cast<double>(q) * segment, k, m, r(k, m)});
                }
            }
        }
        const auto movers = leading_share(s.simulation.config.memberships, 0, 25.0);
        std::mt19937_64 rng(split_seed(seed, 0x73696e65ULL));
        std::bernoulli_distribution coin(0.5);
        MembershipChange to_second{3.05, {}, 1}, to_third{3.05, {}, 2};
        for (std::size_t i : movers) {
            (coin(rng) ? to_second : to_third).nodes.push_back(i);
        }
        s.simulation.schedule.membership_changes = {to_second, to_third};
        return s;
    }
    if (name == "santander") {
        Scenario s;
        s.name = "santander";
        s.variant = Variant::gem;
        s.model.nodes = nodes.value_or(791);
        s.model.groups = 6;
        s.model.truncation = 10;
        s.model.interval = 7.0 * 86400.0;
        s.model.forgetting = {0.1, 1.0, 0.1, 0.1}; // membership tempering off: it also weakens the stick prior
        s.detector.convergence_burn_in = 25;
        s.detector.membership_threshold = 1.55;
        return s;
    }
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

void apply_preset(RunConfig& config, std::string_view name) {
    const std::optional<std::size_t> nodes =
        config.model.nodes > 0 ? std::optional<std::size_t>(config.model.nodes) : std::nullopt;
    Scenario s = make_scenario(name, nodes, config.seed);
    config.preset = s.name;
    config.model = s.model;
    config.detector = s.detector;
    config.variant = s.variant;
    if (s.name == "santander") {
        config.simulation.reset();
        config.node_policy = NodePolicy::first_appearance;
        config.origin = parse_iso8601("2019-01-02");
        config.horizon = 80.0 * s.model.interval;
    } else {
        config.simulation = std::move(s.simulation);
        config.self_loops = config.simulation->config.self_loops;
    }
}

} // namespace netcpd
