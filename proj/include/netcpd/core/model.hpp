#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netcpd/core/matrix.hpp"

namespace netcpd {

/// Temperatures applied to the previous approximate posterior before it is
/// reused as the prior for the next batch. 1 means no forgetting.
struct ForgettingFactors {
    double rate = 1.0;       // block rates lambda
    double membership = 1.0; // node memberships z
    double mixture = 1.0;    // group proportions pi
    double stick = 1.0;      // stick-breaking variables u (unknown group count)
};

/// Conjugate prior parameters. Empty members take their documented defaults
/// when the configuration is validated.
struct Priors {
    Matrix alpha;              // K x K gamma shapes, default 1
    Matrix beta;               // K x K gamma rates, default 1
    std::vector<double> gamma; // K Dirichlet parameters, default drawn from U[0.95, 1.05]
    Matrix eta;                // K_conn x K_conn beta parameters, default 1
    Matrix zeta;               // K_conn x K_conn, default 1
    std::vector<double> xi;    // K_conn Dirichlet parameters, default drawn from U[0.95, 1.05]
};

struct FixedPointOptions {
    std::size_t max_iters = 100;
    double tol = 1e-6; // max absolute change of any tau entry over one sweep
};

struct ModelConfig {
    std::size_t nodes = 0;
    std::size_t groups = 0;            // K
    std::size_t connection_groups = 1; // K_conn, unknown-adjacency engine
    std::size_t truncation = 0;        // L, unknown-group-count engine (0 = unused)
    double interval = 0.0;             // batch width
    ForgettingFactors forgetting;
    std::size_t cavi_cycles = 3;
    Priors priors;
    double gem_concentration = 1.0;
    double gem_rate_shape = 1.0; // scalar gamma prior used by the stick-breaking engine
    double gem_rate_rate = 1.0;
    double occupancy_threshold = 0.1; // epsilon
    FixedPointOptions fixed_point;
};

/// A ModelConfig that passed validate(); defaults are filled in.
class ValidatedConfig {
public:
    const ModelConfig& get() const noexcept { return config_; }
    const ModelConfig* operator->() const noexcept { return &config_; }

private:
    explicit ValidatedConfig(ModelConfig c) : config_(std::move(c)) {}
    friend ValidatedConfig validate(ModelConfig config);
    ModelConfig config_;
};

/// Checks every invariant and fills defaulted priors. Throws ConfigError
/// naming the offending field.
ValidatedConfig validate(ModelConfig config);

struct GammaParams {
    double shape;
    double rate;
    double mean() const noexcept { return shape / rate; }
};

struct RatePosterior {
    Matrix alpha;
    Matrix beta;

    std::size_t groups() const noexcept { return alpha.rows(); }
    GammaParams block(std::size_t k, std::size_t m) const { return {alpha(k, m), beta(k, m)}; }
    Matrix mean() const;
    void check() const;
};

struct MembershipPosterior {
    Matrix tau; // N x K, rows on the simplex

    std::vector<std::size_t> argmax() const;
    std::vector<double> max_probability() const;
    std::vector<double> group_mass() const; // column sums
    void check() const;
};

struct MixturePosterior {
    std::vector<double> gamma;
    void check() const;
};

struct SbmPosterior {
    Matrix sigma; // N x N edge probabilities
    Matrix nu;    // N x K_conn connection memberships
    Matrix eta;
    Matrix zeta;
    std::vector<double> xi;

    Matrix rho_mean() const;
    void check() const;
};

struct GemPosterior {
    std::vector<double> omega;
    std::vector<double> nu_stick;
    RatePosterior rate;
    Matrix tau;             // N x L
    Matrix rate_forgetting; // L x L, entries in {delta_lambda, 1}
    double epsilon = 0.1;

    void check(double delta_lambda) const;
};

/// Stick-breaking weights pi_k = u_k prod_{l<k} (1 - u_l). Requires u_L = 1.
std::vector<double> stick_to_proportions(std::span<const double> sticks);

/// Throws NumericalError unless every row of `m` lies on the simplex within `tol`.
void check_row_stochastic(const Matrix& m, const char* what, double tol = 1e-9);

} // namespace netcpd
