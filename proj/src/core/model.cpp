#include "netcpd/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcpd/core/errors.hpp"

namespace netcpd {

namespace {

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) {
        throw ConfigError(field, message);
    }
}

void check_forgetting(double v, const char* field) {
    require(std::isfinite(v) && v > 0.0 && v <= 1.0, field, "must lie in (0, 1], got " + std::to_string(v));
}

void check_positive_matrix(Matrix& m, std::size_t dim, const char* field) {
    if (m.empty()) {
        m = Matrix(dim, dim, 1.0);
        return;
    }
    require(m.rows() == dim && m.cols() == dim, field,
            "expected " + std::to_string(dim) + "x" + std::to_string(dim));
    for (double v : m.values()) {
        require(std::isfinite(v) && v > 0.0, field, "entries must be strictly positive");
    }
}

void check_positive_vector(const std::vector<double>& v, std::size_t dim, const char* field) {
    if (v.empty()) {
        return;
    }
    require(v.size() == dim, field, "expected length " + std::to_string(dim));
    for (double x : v) {
        require(std::isfinite(x) && x > 0.0, field, "entries must be strictly positive");
    }
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

ValidatedConfig validate(ModelConfig c) {
    require(c.nodes >= 2, "nodes", "need at least 2 nodes");
    require(c.groups >= 1, "groups", "need at least 1 group");
    require(c.connection_groups >= 1, "connection_groups", "need at least 1 connection group");
    require(std::isfinite(c.interval) && c.interval > 0.0, "interval", "batch width must be positive");
    check_forgetting(c.forgetting.rate, "forgetting.rate");
    check_forgetting(c.forgetting.membership, "forgetting.membership");
    check_forgetting(c.forgetting.mixture, "forgetting.mixture");
    check_forgetting(c.forgetting.stick, "forgetting.stick");
    require(c.cavi_cycles >= 1, "cavi_cycles", "need at least one CAVI cycle");
    require(c.fixed_point.max_iters >= 1, "fixed_point.max_iters", "must be >= 1");
    require(positive_finite(c.fixed_point.tol), "fixed_point.tol", "must be positive");
    require(positive_finite(c.gem_concentration), "gem_concentration", "must be positive");
    require(positive_finite(c.gem_rate_shape), "gem_rate_shape", "must be positive");
    require(positive_finite(c.gem_rate_rate), "gem_rate_rate", "must be positive");
    require(positive_finite(c.occupancy_threshold), "occupancy_threshold", "must be positive");

    check_positive_matrix(c.priors.alpha, c.groups, "priors.alpha");
    check_positive_matrix(c.priors.beta, c.groups, "priors.beta");
    check_positive_vector(c.priors.gamma, c.groups, "priors.gamma");
    check_positive_matrix(c.priors.eta, c.connection_groups, "priors.eta");
    check_positive_matrix(c.priors.zeta, c.connection_groups, "priors.zeta");
    check_positive_vector(c.priors.xi, c.connection_groups, "priors.xi");
    return ValidatedConfig(std::move(c));
}

Matrix RatePosterior::mean() const {
    Matrix out(alpha.rows(), alpha.cols());
    for (std::size_t k = 0; k < alpha.rows(); ++k) {
        for (std::size_t m = 0; m < alpha.cols(); ++m) {
            out(k, m) = alpha(k, m) / beta(k, m);
        }
    }
    return out;
}

void RatePosterior::check() const {
    for (std::size_t i = 0; i < alpha.values().size(); ++i) {
        if (!positive_finite(alpha.values()[i]) || !positive_finite(beta.values()[i])) {
            throw NumericalError("rate posterior left the positive domain");
        }
    }
}

std::vector<std::size_t> MembershipPosterior::argmax() const {
    std::vector<std::size_t> out(tau.rows());
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        auto r = tau.row(i);
        std::size_t best = 0;
        for (std::size_t k = 1; k < r.size(); ++k) {
            if (r[k] > r[best]) {
                best = k;
            }
        }
        out[i] = best;
    }
    return out;
}

std::vector<double> MembershipPosterior::max_probability() const {
    std::vector<double> out(tau.rows());
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        auto r = tau.row(i);
        out[i] = *std::max_element(r.begin(), r.end());
    }
    return out;
}

std::vector<double> MembershipPosterior::group_mass() const {
    std::vector<double> out(tau.cols(), 0.0);
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        auto r = tau.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            out[k] += r[k];
        }
    }
    return out;
}

void MembershipPosterior::check() const { check_row_stochastic(tau, "tau"); }

void MixturePosterior::check() const {
    for (double g : gamma) {
        if (!positive_finite(g)) {
            throw NumericalError("Dirichlet parameter left the positive domain");
        }
    }
}

Matrix SbmPosterior::rho_mean() const {
    Matrix out(eta.rows(), eta.cols());
    for (std::size_t k = 0; k < eta.rows(); ++k) {
        for (std::size_t m = 0; m < eta.cols(); ++m) {
            out(k, m) = eta(k, m) / (eta(k, m) + zeta(k, m));
        }
    }
    return out;
}

void SbmPosterior::check() const {
    for (double s : sigma.values()) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw NumericalError("edge probability outside [0, 1]");
        }
    }
    check_row_stochastic(nu, "nu");
    for (std::size_t i = 0; i < eta.values().size(); ++i) {
        if (!positive_finite(eta.values()[i]) || !positive_finite(zeta.values()[i])) {
            throw NumericalError("connection-probability posterior left the positive domain");
        }
    }
    for (double x : xi) {
        if (!positive_finite(x)) {
            throw NumericalError("connection Dirichlet parameter left the positive domain");
        }
    }
}

void GemPosterior::check(double delta_lambda) const {
    for (std::size_t l = 0; l < omega.size(); ++l) {
        if (!positive_finite(omega[l]) || !positive_finite(nu_stick[l])) {
            throw NumericalError("stick posterior left the positive domain");
        }
    }
    rate.check();
    check_row_stochastic(tau, "tau");
    for (double d : rate_forgetting.values()) {
        if (d != delta_lambda && d != 1.0) {
            throw NumericalError("per-block forgetting factor outside {delta_lambda, 1}");
        }
    }
}

std::vector<double> stick_to_proportions(std::span<const double> sticks) {
    if (sticks.empty()) {
        throw std::invalid_argument("stick_to_proportions: empty stick vector");
    }
    if (sticks.back() != 1.0) {
        throw std::invalid_argument("stick_to_proportions: truncation requires the last stick to be 1");
    }
    std::vector<double> out(sticks.size());
    double remaining = 1.0;
    for (std::size_t k = 0; k < sticks.size(); ++k) {
        const double u = sticks[k];
        if (!(u >= 0.0 && u <= 1.0)) {
            throw std::invalid_argument("stick_to_proportions: sticks must lie in [0, 1]");
        }
        out[k] = u * remaining;
        remaining *= 1.0 - u;
    }
    return out;
}

void check_row_stochastic(const Matrix& m, const char* what, double tol) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double total = 0.0;
        for (double v : m.row(i)) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw NumericalError(std::string(what) + ": negative or non-finite entry in row " +
                                     std::to_string(i));
            }
            total += v;
        }
        if (std::abs(total - 1.0) > tol) {
            throw NumericalError(std::string(what) + ": row " + std::to_string(i) + " sums to " +
                                 std::to_string(total));
        }
    }
}

} // namespace netcpd
