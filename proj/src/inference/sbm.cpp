#include "netcpd/inference/sbm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/parallel.hpp"
#include "netcpd/core/special.hpp"

namespace netcpd {

namespace {

Matrix complement(const Matrix& sigma) {
    Matrix out(sigma.rows(), sigma.cols());
    for (std::size_t i = 0; i < sigma.values().size(); ++i) {
        out.values()[i] = 1.0 - sigma.values()[i];
    }
    return out;
}

// Row-wise fixed point for the connection memberships under edge probabilities sigma.
FixedPointReport connection_fixed_point(Matrix& nu, const Matrix& sigma, const Matrix& eta, const Matrix& zeta,
                                        std::span<const double> xi, const FixedPointOptions& options) {
    const std::size_t n = nu.rows();
    const std::size_t k = nu.cols();
    FixedPointReport report;
    if (k == 1) {
        nu.fill(1.0);
        report.converged = true;
        return report;
    }
    Matrix edge(k, k), no_edge(k, k); // E log rho, E log(1 - rho)
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            const double both = digamma(eta(a, b) + zeta(a, b));
            edge(a, b) = digamma(eta(a, b)) - both;
            no_edge(a, b) = digamma(zeta(a, b)) - both;
        }
    }
    const auto log_prior = dirichlet_log_prior(xi, 1.0);
    std::vector<double> totals(k, 0.0), out_w(k), in_w(k), logits(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            totals[a] += nu(i, a);
        }
    }
    for (std::size_t sweep = 0; sweep < options.max_iters; ++sweep) {
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(out_w.begin(), out_w.end(), 0.0);
            std::fill(in_w.begin(), in_w.end(), 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double s_out = sigma(i, j);
                const double s_in = sigma(j, i);
                for (std::size_t m = 0; m < k; ++m) {
                    out_w[m] += s_out * nu(j, m);
                    in_w[m] += s_in * nu(j, m);
                }
            }
            auto row = nu.row(i);
            const double s_self = sigma(i, i);
            for (std::size_t a = 0; a < k; ++a) {
                double v = log_prior[a];
                for (std::size_t m = 0; m < k; ++m) {
                    v += out_w[m] * edge(a, m) + (totals[m] - out_w[m]) * no_edge(a, m);
                    v += in_w[m] * edge(m, a) + (totals[m] - in_w[m]) * no_edge(m, a);
                }
                const double self = s_self * edge(a, a) + (1.0 - s_self) * no_edge(a, a);
                v += (1.0 - 2.0 * row[a]) * self;
                logits[a] = v;
            }
            normalize_log_weights(logits);
            for (std::size_t a = 0; a < k; ++a) {
                residual = std::max(residual, std::abs(logits[a] - row[a]));
                totals[a] += logits[a] - row[a];
                row[a] = logits[a];
            }
        }
        report.iterations = sweep + 1;
        report.residual = residual;
        if (residual < options.tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

// out(i, j) = sum_km left(i, k) block(k, m) right(j, m)
Matrix bilinear(const Matrix& left, const Matrix& block, const Matrix& right) {
    const std::size_t n = left.rows();
    const std::size_t k = block.rows();
    Matrix projected(n, k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                projected(i, b) += left(i, a) * block(a, b);
            }
        }
    }
    Matrix out(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (std::size_t b = 0; b < k; ++b) {
                v += projected(i, b) * right(j, b);
            }
            out(i, j) = v;
        }
    }
    return out;
}

} // namespace

double edge_probability(double rho, double exposure) {
    const double kept = rho * std::exp(-exposure);
    const double denom = 1.0 - rho + kept;
    return denom > 0.0 ? kept / denom : 1.0;
}

SbmState sbm_init(const ValidatedConfig& config, std::uint64_t seed) {
    const ModelConfig& c = config.get();
    SbmState s;
    s.core = bhpp_init(config, seed);
    s.graph.sigma = Matrix(c.nodes, c.nodes, 0.5);
    s.graph.nu = Matrix(c.nodes, c.connection_groups, 1.0 / static_cast<double>(c.connection_groups));
    s.graph.eta = c.priors.eta;
    s.graph.zeta = c.priors.zeta;
    if (c.priors.xi.empty()) {
        std::mt19937_64 rng(split_seed(seed, 0x78690000ULL));
        std::uniform_real_distribution<double> u(0.95, 1.05);
        s.graph.xi.resize(c.connection_groups);
        for (double& v : s.graph.xi) {
            v = u(rng);
        }
    } else {
        s.graph.xi = c.priors.xi;
    }
    s.cumulative_counts = Matrix(c.nodes, c.nodes, 0.0);
    s.cumulative_rate_mean = s.core.rate.mean();
    return s;
}

SbmState sbm_step(const SbmState& state, const EventBatch& batch, const ValidatedConfig& config,
                  FixedPointReport* report) {
    const ModelConfig& c = config.get();
    const std::size_t n = c.nodes;
    SbmState next = state;

    // (a) CAVI with the previous edge probabilities as weights.
    const EdgeSet weighted = EdgeSet::weighted(state.graph.sigma);
    next.core = bhpp_step(state.core, batch, config, weighted, report);
    const Matrix present = pair_mass(state.graph.nu, weighted);
    const Matrix absent = pair_mass(state.graph.nu, EdgeSet::weighted(complement(state.graph.sigma)));
    for (std::size_t i = 0; i < present.values().size(); ++i) {
        next.graph.eta.values()[i] = state.graph.eta.values()[i] + present.values()[i];
        next.graph.zeta.values()[i] = state.graph.zeta.values()[i] + absent.values()[i];
    }

    // (b) Edge probabilities from everything seen so far.
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : batch.out_edges(i)) {
            next.cumulative_counts(i, e.node) += e.count;
        }
    }
    const Matrix mean = next.core.rate.mean();
    for (std::size_t v = 0; v < mean.values().size(); ++v) {
        next.cumulative_rate_mean.values()[v] += mean.values()[v];
    }
    const Matrix exposure = bilinear(next.core.membership.tau, next.cumulative_rate_mean, next.core.membership.tau);
    const Matrix rho = bilinear(state.graph.nu, next.graph.rho_mean(), state.graph.nu);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            next.graph.sigma(i, j) = next.cumulative_counts(i, j) > 0.0
                                         ? 1.0
                                         : edge_probability(rho(i, j), c.interval * exposure(i, j));
        }
    }

    // Connection memberships and their Dirichlet see the new edge probabilities.
    for (std::size_t cycle = 0; cycle < c.cavi_cycles; ++cycle) {
        connection_fixed_point(next.graph.nu, next.graph.sigma, next.graph.eta, next.graph.zeta, next.graph.xi,
                               c.fixed_point);
        for (std::size_t a = 0; a < c.connection_groups; ++a) {
            double mass = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mass += next.graph.nu(i, a);
            }
            next.graph.xi[a] = state.graph.xi[a] + mass;
        }
    }
    next.graph.check();
    return next;
}

SbmEngine::SbmEngine(ValidatedConfig config, std::uint64_t seed)
    : config_(std::move(config)), state_(sbm_init(config_, seed)) {}

void SbmEngine::step(const EventBatch& batch) { state_ = sbm_step(state_, batch, config_, &report_); }

} // namespace netcpd
