#pragma once

#include <cstddef>
#include <cstdint>

#include "netcpd/core/edge_set.hpp"
#include "netcpd/core/model.hpp"
#include "netcpd/inference/engine.hpp"

namespace netcpd {

struct BhppState {
    RatePosterior rate;
    MembershipPosterior membership;
    MixturePosterior mixture;
    std::size_t step = 0;
};

/// Initial state: rate priors from the config, tau rows uniform, gamma from the
/// config or drawn uniformly on [0.95, 1.05] with `seed`.
BhppState bhpp_init(const ValidatedConfig& config, std::uint64_t seed);

/// One batch of the known-graph online procedure. Each of the cavi_cycles
/// cycles runs the membership fixed point, then the mixture update, then the
/// rate update. The rate and mixture recursions always start from the step
/// r-1 values; inside a cycle the fixed point sees the latest rates and mixture.
BhppState bhpp_step(const BhppState& state, const EventBatch& batch, const ValidatedConfig& config,
                    const EdgeSet& edges, FixedPointReport* report = nullptr);

class BhppEngine final : public StreamingEngine {
public:
    BhppEngine(ValidatedConfig config, EdgeSet edges, std::uint64_t seed);
    BhppEngine(ValidatedConfig config, EdgeSet edges, BhppState initial);

    /// Keeps tau fixed at `tau` for every subsequent step (oracle runs).
    void clamp_memberships(Matrix tau);

    void step(const EventBatch& batch) override;
    std::size_t step_index() const override { return state_.step; }
    const RatePosterior& rates() const override { return state_.rate; }
    const Matrix& memberships() const override { return state_.membership.tau; }
    const FixedPointReport& last_fixed_point() const override { return report_; }

    const BhppState& state() const noexcept { return state_; }
    const ValidatedConfig& config() const noexcept { return config_; }

private:
    ValidatedConfig config_;
    EdgeSet edges_;
    BhppState state_;
    FixedPointReport report_;
    bool clamped_ = false;
};

} // namespace netcpd
