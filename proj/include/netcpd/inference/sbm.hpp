#pragma once

#include <cstddef>
#include <cstdint>

#include "netcpd/core/model.hpp"
#include "netcpd/inference/bhpp.hpp"
#include "netcpd/inference/engine.hpp"

namespace netcpd {

struct SbmState {
    BhppState core;
    SbmPosterior graph;
    Matrix cumulative_counts;    // x_ij(r width)
    Matrix cumulative_rate_mean; // sum over l = 0..r of the posterior rate means
};

/// sigma = 1/2 everywhere, nu uniform, eta/zeta from the config, xi from the
/// config or drawn on [0.95, 1.05]. The rate-mean sum starts at the prior mean.
SbmState sbm_init(const ValidatedConfig& config, std::uint64_t seed);

/// One batch of the unknown-adjacency procedure, in two phases:
///  (a) CAVI for rates, memberships and mixture weighted by the previous edge
///      probabilities, plus the untempered connection-probability update;
///  (b) edge probabilities from the cumulative counts and summed rate means,
///      then the connection memberships and their Dirichlet under the new
///      edge probabilities.
SbmState sbm_step(const SbmState& state, const EventBatch& batch, const ValidatedConfig& config,
                  FixedPointReport* report = nullptr);

/// Edge probability for a pair with no events so far, given the expected
/// connection probability and the exponent width * summed expected rate.
double edge_probability(double rho, double exposure);

class SbmEngine final : public StreamingEngine {
public:
    SbmEngine(ValidatedConfig config, std::uint64_t seed);

    void step(const EventBatch& batch) override;
    std::size_t step_index() const override { return state_.core.step; }
    const RatePosterior& rates() const override { return state_.core.rate; }
    const Matrix& memberships() const override { return state_.core.membership.tau; }
    const FixedPointReport& last_fixed_point() const override { return report_; }
    const Matrix* edge_probabilities() const override { return &state_.graph.sigma; }

    const SbmState& state() const noexcept { return state_; }

private:
    ValidatedConfig config_;
    SbmState state_;
    FixedPointReport report_;
};

} // namespace netcpd
