#include "netcpd/inference/gem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/parallel.hpp"
#include "netcpd/core/special.hpp"
#include "netcpd/inference/cavi.hpp"

namespace netcpd {

GemState gem_init(const ValidatedConfig& config, std::uint64_t seed) {
    const ModelConfig& c = config.get();
    if (c.truncation < 1) {
        throw ConfigError("truncation", "the stick-breaking engine needs a truncation level >= 1");
    }
    const std::size_t l = c.truncation;
    GemState s;
    // Stick parameters start near (1, concentration) with a small uniform jitter; otherwise the
    // last two groups stay exchangeable forever under a uniform tau.
    std::mt19937_64 rng(split_seed(seed, 0x737469636bULL));
    std::uniform_real_distribution<double> jitter(0.95, 1.05);
    s.posterior.omega.resize(l);
    s.posterior.nu_stick.resize(l);
    for (std::size_t k = 0; k < l; ++k) {
        s.posterior.omega[k] = jitter(rng);
        s.posterior.nu_stick[k] = c.gem_concentration * jitter(rng);
    }
    s.posterior.rate = {Matrix(l, l, c.gem_rate_shape), Matrix(l, l, c.gem_rate_rate)};
    s.posterior.tau = Matrix(c.nodes, l, 1.0 / static_cast<double>(l));
    s.posterior.rate_forgetting = Matrix(l, l, c.forgetting.rate);
    s.posterior.epsilon = c.occupancy_threshold;
    return s;
}

std::vector<double> stick_log_prior(std::span<const double> omega, std::span<const double> nu_stick) {
    const std::size_t l = omega.size();
    std::vector<double> out(l);
    double carried = 0.0; // sum_{l' < k} E log(1 - u_l')
    for (std::size_t k = 0; k < l; ++k) {
        const double both = digamma(omega[k] + nu_stick[k]);
        const double log_u = (k + 1 == l) ? 0.0 : digamma(omega[k]) - both;
        out[k] = log_u + carried;
        carried += digamma(nu_stick[k]) - both;
    }
    return out;
}

Matrix occupancy_gate(const Matrix& block_mass, double epsilon, double delta_lambda) {
    Matrix out(block_mass.rows(), block_mass.cols());
    for (std::size_t v = 0; v < out.values().size(); ++v) {
        out.values()[v] = block_mass.values()[v] < epsilon ? 1.0 : delta_lambda;
    }
    return out;
}

GemState gem_step(const GemState& state, const EventBatch& batch, const ValidatedConfig& config,
                  const EdgeSet& edges, FixedPointReport* report) {
    const ModelConfig& c = config.get();
    const std::size_t l = state.posterior.omega.size();
    const GemPosterior& prev = state.posterior;
    GemState next = state;
    next.step = state.step + 1;
    GemPosterior& cur = next.posterior;
    FixedPointReport last;
    for (std::size_t cycle = 0; cycle < c.cavi_cycles; ++cycle) {
        auto log_prior = stick_log_prior(cur.omega, cur.nu_stick);
        for (double& v : log_prior) {
            v *= c.forgetting.membership;
        }
        last = update_memberships_fixed_point(cur.tau, batch, edges, cur.rate, log_prior, c.fixed_point);

        std::vector<double> mass(l, 0.0);
        for (std::size_t i = 0; i < cur.tau.rows(); ++i) {
            for (std::size_t k = 0; k < l; ++k) {
                mass[k] += cur.tau(i, k);
            }
        }
        double beyond = 0.0; // sum_j sum_{k > l} tau_jk
        for (std::size_t k = l; k-- > 0;) {
            if (k + 1 < l) {
                cur.omega[k] = c.forgetting.stick * (prev.omega[k] - 1.0) + c.forgetting.membership * mass[k] + 1.0;
                cur.nu_stick[k] =
                    c.forgetting.stick * (prev.nu_stick[k] - 1.0) + c.forgetting.membership * beyond + 1.0;
            }
            beyond += mass[k];
        }

        cur.rate_forgetting = occupancy_gate(pair_mass(cur.tau, edges), cur.epsilon, c.forgetting.rate);
        cur.rate = update_rates(prev.rate, cur.tau, batch, edges, cur.rate_forgetting);
    }
    cur.check(c.forgetting.rate);
    if (report) {
        *report = last;
    }
    return next;
}

GemEngine::GemEngine(ValidatedConfig config, EdgeSet edges, std::uint64_t seed)
    : config_(std::move(config)), edges_(std::move(edges)), state_(gem_init(config_, seed)) {
    if (edges_.nodes() != config_->nodes) {
        throw std::invalid_argument("edge set node count differs from the model");
    }
}

void GemEngine::step(const EventBatch& batch) { state_ = gem_step(state_, batch, config_, edges_, &report_); }

std::vector<double> GemEngine::occupancy() const {
    const Matrix mass = pair_mass(state_.posterior.tau, edges_);
    std::vector<double> out(mass.rows());
    for (std::size_t k = 0; k < mass.rows(); ++k) {
        out[k] = mass(k, k);
    }
    return out;
}

std::size_t GemEngine::occupied_groups() const {
    std::size_t count = 0;
    for (double m : occupancy()) {
        if (m >= state_.posterior.epsilon) {
            ++count;
        }
    }
    return count;
}

} // namespace netcpd
