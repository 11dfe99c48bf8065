#include "netcpd/simulator/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/parallel.hpp"

namespace netcpd {

std::vector<std::size_t> sample_memberships(std::size_t nodes, std::span<const double> proportions,
                                            std::uint64_t seed) {
    if (proportions.empty()) {
        throw ConfigError("proportions", "need at least one group");
    }
    double total = 0.0;
    for (double p : proportions) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw ConfigError("proportions", "entries must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("proportions", "must sum to 1, got " + std::to_string(total));
    }
    std::mt19937_64 rng(split_seed(seed, 0x6d656d62ULL));
    std::discrete_distribution<std::size_t> draw(proportions.begin(), proportions.end());
    std::vector<std::size_t> labels(nodes);
    for (auto& z : labels) {
        z = draw(rng);
    }
    return labels;
}

Matrix sample_sbm_adjacency(std::span<const std::size_t> connection_groups, const Matrix& rho,
                            std::uint64_t seed) {
    for (double p : rho.values()) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("rho", "connection probabilities must lie in [0, 1]");
        }
    }
    const std::size_t n = connection_groups.size();
    Matrix a(n, n, 0.0);
    std::mt19937_64 rng(split_seed(seed, 0x61646a61ULL));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = u(rng) < rho(connection_groups[i], connection_groups[j]) ? 1.0 : 0.0;
        }
    }
    return a;
}

namespace {

struct Segment {
    double start;
    double end;
    const std::vector<std::size_t>* labels;
    const Matrix* rates;
};

} // namespace

SimOutput simulate(const SimulationConfig& config, const ChangeSchedule& schedule, double horizon,
                   std::uint64_t seed) {
    const std::size_t n = config.nodes;
    const std::size_t k = config.groups;
    if (n == 0 || k == 0) {
        throw ConfigError("nodes", "need a non-empty network");
    }
    if (!(std::isfinite(horizon) && horizon > 0.0)) {
        throw ConfigError("horizon", "must be positive");
    }
    if (config.rates.rows() != k || config.rates.cols() != k) {
        throw ConfigError("rates", "expected a K x K matrix");
    }
    for (double v : config.rates.values()) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("rates", "rates must be non-negative");
        }
    }
    schedule.validate(horizon, n, k);

    std::vector<std::size_t> initial = config.memberships;
    if (initial.empty()) {
        initial = sample_memberships(n, config.proportions, seed);
    }
    if (initial.size() != n) {
        throw ConfigError("memberships", "expected one label per node");
    }
    for (std::size_t z : initial) {
        if (z >= k) {
            throw ConfigError("memberships", "label out of range");
        }
    }

    SimOutput out;
    out.horizon = horizon;
    out.true_memberships = membership_path(initial, schedule);
    out.true_rates = rate_path(config.rates, schedule);
    if (config.adjacency.empty()) {
        out.adjacency = Matrix(n, n, 1.0);
        if (!config.self_loops) {
            for (std::size_t i = 0; i < n; ++i) {
                out.adjacency(i, i) = 0.0;
            }
        }
    } else {
        if (config.adjacency.rows() != n || config.adjacency.cols() != n) {
            throw ConfigError("adjacency", "expected an N x N matrix");
        }
        out.adjacency = config.adjacency;
    }

    std::vector<double> cuts{0.0};
    for (double t : schedule.breakpoints()) {
        cuts.push_back(t);
    }
    cuts.push_back(horizon);
    std::vector<Segment> segments;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        // Any time strictly inside the segment selects its constant state.
        const double probe = 0.5 * (cuts[s] + cuts[s + 1]);
        segments.push_back({cuts[s], cuts[s + 1], &out.true_memberships.at(probe), &out.true_rates.at(probe)});
    }

    std::vector<std::vector<Event>> per_row(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto& sink = per_row[i];
            for (std::size_t j = 0; j < n; ++j) {
                if (out.adjacency(i, j) == 0.0) {
                    continue;
                }
                std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(i) * n + j));
                for (const auto& seg : segments) {
                    const double rate = (*seg.rates)((*seg.labels)[i], (*seg.labels)[j]);
                    const double mean = rate * (seg.end - seg.start);
                    if (mean <= 0.0) {
                        continue;
                    }
                    const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);
                    std::uniform_real_distribution<double> u(0.0, 1.0);
                    for (std::uint64_t c = 0; c < count; ++c) {
                        // end - u * width lies in (start, end].
                        sink.push_back({i, j, seg.end - u(rng) * (seg.end - seg.start)});
                    }
                }
            }
        }
    });

    std::size_t total = 0;
    for (const auto& row : per_row) {
        total += row.size();
    }
    out.events.reserve(total);
    for (auto& row : per_row) {
        out.events.insert(out.events.end(), row.begin(), row.end());
        std::vector<Event>().swap(row);
    }
    std::sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.time, a.source, a.dest) < std::tie(b.time, b.source, b.dest);
    });
    return out;
}

} // namespace netcpd
