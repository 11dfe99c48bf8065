#include "netcpd/inference/bhpp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "netcpd/core/parallel.hpp"

namespace netcpd {

std::vector<double> StreamingEngine::occupancy() const {
    const Matrix& tau = memberships();
    std::vector<double> mass(tau.cols(), 0.0);
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        for (std::size_t k = 0; k < tau.cols(); ++k) {
            mass[k] += tau(i, k);
        }
    }
    for (double& m : mass) {
        m *= m;
    }
    return mass;
}

namespace {

std::vector<double> jittered_ones(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    std::mt19937_64 rng(split_seed(seed, stream));
    std::uniform_real_distribution<double> u(0.95, 1.05);
    std::vector<double> out(n);
    for (double& v : out) {
        v = u(rng);
    }
    return out;
}

} // namespace

BhppState bhpp_init(const ValidatedConfig& config, std::uint64_t seed) {
    const ModelConfig& c = config.get();
    BhppState s;
    s.rate = {c.priors.alpha, c.priors.beta};
    s.membership.tau = Matrix(c.nodes, c.groups, 1.0 / static_cast<double>(c.groups));
    s.mixture.gamma = c.priors.gamma.empty() ? jittered_ones(c.groups, seed, 0x67616d6dULL) : c.priors.gamma;
    return s;
}

BhppState bhpp_step(const BhppState& state, const EventBatch& batch, const ValidatedConfig& config,
                    const EdgeSet& edges, FixedPointReport* report) {
    const ModelConfig& c = config.get();
    if (std::abs(batch.width() - c.interval) > 1e-12 * c.interval) {
        throw std::invalid_argument("batch width differs from the configured interval");
    }
    BhppState next = state;
    next.step = state.step + 1;
    FixedPointReport last;
    for (std::size_t cycle = 0; cycle < c.cavi_cycles; ++cycle) {
        const auto log_prior = dirichlet_log_prior(next.mixture.gamma, c.forgetting.membership);
        last = update_memberships_fixed_point(next.membership.tau, batch, edges, next.rate, log_prior, c.fixed_point);
        next.mixture = update_mixture(state.mixture, next.membership.tau, c.forgetting.mixture, c.forgetting.membership);
        next.rate = update_rates(state.rate, next.membership.tau, batch, edges, c.forgetting.rate);
    }
    next.membership.check();
    if (report) {
        *report = last;
    }
    return next;
}

BhppEngine::BhppEngine(ValidatedConfig config, EdgeSet edges, std::uint64_t seed)
    : BhppEngine(config, std::move(edges), bhpp_init(config, seed)) {}

BhppEngine::BhppEngine(ValidatedConfig config, EdgeSet edges, BhppState initial)
    : config_(std::move(config)), edges_(std::move(edges)), state_(std::move(initial)) {
    if (edges_.nodes() != config_->nodes) {
        throw std::invalid_argument("edge set node count differs from the model");
    }
}

void BhppEngine::clamp_memberships(Matrix tau) {
    if (tau.rows() != config_->nodes || tau.cols() != config_->groups) {
        throw std::invalid_argument("clamped memberships have the wrong shape");
    }
    check_row_stochastic(tau, "tau");
    state_.membership.tau = std::move(tau);
    clamped_ = true;
}

void BhppEngine::step(const EventBatch& batch) {
    if (!clamped_) {
        state_ = bhpp_step(state_, batch, config_, edges_, &report_);
        return;
    }
    const ModelConfig& c = config_.get();
    BhppState next = state_;
    next.step = state_.step + 1;
    next.mixture = update_mixture(state_.mixture, next.membership.tau, c.forgetting.mixture, c.forgetting.membership);
    next.rate = update_rates(state_.rate, next.membership.tau, batch, edges_, c.forgetting.rate);
    report_ = {true, 0, 0.0, 0};
    state_ = std::move(next);
}

} // namespace netcpd
