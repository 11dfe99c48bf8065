#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netcpd/core/edge_set.hpp"
#include "netcpd/core/model.hpp"
#include "netcpd/inference/engine.hpp"

namespace netcpd {

struct GemState {
    GemPosterior posterior;
    std::size_t step = 0;
};

/// tau rows uniform over the L truncated groups, omega = 1 and nu = the GEM
/// concentration, each scaled by a U[0.95, 1.05] draw from `seed`; scalar
/// gamma prior on every block.
GemState gem_init(const ValidatedConfig& config, std::uint64_t seed);

/// Per-group log prior from the stick posteriors:
///   E log u_k + sum_{l<k} E log(1 - u_l), with u_L = 1 so E log u_L = 0.
std::vector<double> stick_log_prior(std::span<const double> omega, std::span<const double> nu_stick);

/// Per-block forgetting: 1 where the block mass is below epsilon, else delta_lambda.
Matrix occupancy_gate(const Matrix& block_mass, double epsilon, double delta_lambda);

/// One batch of the unknown-group-count procedure.
GemState gem_step(const GemState& state, const EventBatch& batch, const ValidatedConfig& config,
                  const EdgeSet& edges, FixedPointReport* report = nullptr);

class GemEngine final : public StreamingEngine {
public:
    GemEngine(ValidatedConfig config, EdgeSet edges, std::uint64_t seed);

    void step(const EventBatch& batch) override;
    std::size_t step_index() const override { return state_.step; }
    const RatePosterior& rates() const override { return state_.posterior.rate; }
    const Matrix& memberships() const override { return state_.posterior.tau; }
    const FixedPointReport& last_fixed_point() const override { return report_; }
    std::vector<double> occupancy() const override;

    /// Groups whose diagonal block mass is at least epsilon.
    std::size_t occupied_groups() const;

    const GemState& state() const noexcept { return state_; }

private:
    ValidatedConfig config_;
    EdgeSet edges_;
    GemState state_;
    FixedPointReport report_;
};

} // namespace netcpd
