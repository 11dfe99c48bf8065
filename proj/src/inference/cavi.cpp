#include "netcpd/inference/cavi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/special.hpp"

namespace netcpd {

namespace {

void require_shapes(const Matrix& tau, const EventBatch& batch, const EdgeSet& edges) {
    if (tau.rows() != batch.nodes() || tau.rows() != edges.nodes()) {
        throw std::invalid_argument("node count mismatch between memberships, batch and edge set");
    }
}

std::vector<double> column_sums(const Matrix& tau) {
    std::vector<double> s(tau.cols(), 0.0);
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        auto r = tau.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            s[k] += r[k];
        }
    }
    return s;
}

// Accumulates into `mass` the weighted out-neighbourhood sum of tau rows for node i.
void out_mass(const Matrix& tau, const EdgeSet& edges, std::span<const double> totals, std::size_t i,
              std::span<double> mass) {
    const std::size_t k = tau.cols();
    std::fill(mass.begin(), mass.end(), 0.0);
    switch (edges.kind()) {
    case EdgeSet::Kind::complete: {
        auto own = tau.row(i);
        for (std::size_t m = 0; m < k; ++m) {
            mass[m] = totals[m] - (edges.self_loops() ? 0.0 : own[m]);
        }
        break;
    }
    case EdgeSet::Kind::sparse:
        for (std::size_t j : edges.out_neighbors(i)) {
            auto r = tau.row(j);
            for (std::size_t m = 0; m < k; ++m) {
                mass[m] += r[m];
            }
        }
        break;
    case EdgeSet::Kind::weighted: {
        auto w = edges.weights().row(i);
        for (std::size_t j = 0; j < tau.rows(); ++j) {
            if (w[j] == 0.0) {
                continue;
            }
            auto r = tau.row(j);
            for (std::size_t m = 0; m < k; ++m) {
                mass[m] += w[j] * r[m];
            }
        }
        break;
    }
    }
}

void in_mass(const Matrix& tau, const EdgeSet& edges, std::span<const double> totals, std::size_t i,
             std::span<double> mass) {
    const std::size_t k = tau.cols();
    switch (edges.kind()) {
    case EdgeSet::Kind::complete:
        out_mass(tau, edges, totals, i, mass);
        break;
    case EdgeSet::Kind::sparse:
        std::fill(mass.begin(), mass.end(), 0.0);
        for (std::size_t j : edges.in_neighbors(i)) {
            auto r = tau.row(j);
            for (std::size_t m = 0; m < k; ++m) {
                mass[m] += r[m];
            }
        }
        break;
    case EdgeSet::Kind::weighted: {
        std::fill(mass.begin(), mass.end(), 0.0);
        const Matrix& w = edges.weights();
        for (std::size_t j = 0; j < tau.rows(); ++j) {
            const double wji = w(j, i);
            if (wji == 0.0) {
                continue;
            }
            auto r = tau.row(j);
            for (std::size_t m = 0; m < k; ++m) {
                mass[m] += wji * r[m];
            }
        }
        break;
    }
    }
}

} // namespace

Matrix pair_mass(const Matrix& tau, const EdgeSet& edges) {
    if (tau.rows() != edges.nodes()) {
        throw std::invalid_argument("pair_mass: node count mismatch");
    }
    const std::size_t k = tau.cols();
    Matrix out(k, k, 0.0);
    if (edges.kind() == EdgeSet::Kind::complete) {
        const auto s = column_sums(tau);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                out(a, b) = s[a] * s[b];
            }
        }
        if (!edges.self_loops()) {
            for (std::size_t i = 0; i < tau.rows(); ++i) {
                auto r = tau.row(i);
                for (std::size_t a = 0; a < k; ++a) {
                    for (std::size_t b = 0; b < k; ++b) {
                        out(a, b) -= r[a] * r[b];
                    }
                }
            }
            // Cancellation can leave tiny negatives on empty blocks.
            for (double& v : out.values()) {
                v = std::max(v, 0.0);
            }
        }
        return out;
    }
    std::vector<double> neighbours(k);
    const std::vector<double> unused;
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        out_mass(tau, edges, unused, i, neighbours);
        auto r = tau.row(i);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                out(a, b) += r[a] * neighbours[b];
            }
        }
    }
    return out;
}

Matrix pair_counts(const Matrix& tau, const EventBatch& batch, const EdgeSet& edges) {
    require_shapes(tau, batch, edges);
    const std::size_t k = tau.cols();
    Matrix out(k, k, 0.0);
    for (std::size_t i = 0; i < batch.nodes(); ++i) {
        auto ri = tau.row(i);
        for (const auto& e : batch.out_edges(i)) {
            const double w = edges.weight(i, e.node);
            if (w == 0.0) {
                continue;
            }
            const double x = w * e.count;
            auto rj = tau.row(e.node);
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = 0; b < k; ++b) {
                    out(a, b) += x * ri[a] * rj[b];
                }
            }
        }
    }
    return out;
}

RatePosterior update_rates(const RatePosterior& previous, const Matrix& tau, const EventBatch& batch,
                           const EdgeSet& edges, const Matrix& forgetting) {
    const std::size_t k = tau.cols();
    if (previous.alpha.rows() != k || forgetting.rows() != k || forgetting.cols() != k) {
        throw std::invalid_argument("update_rates: group dimension mismatch");
    }
    const Matrix counts = pair_counts(tau, batch, edges);
    const Matrix mass = pair_mass(tau, edges);
    RatePosterior next{Matrix(k, k), Matrix(k, k)};
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            const double d = forgetting(a, b);
            next.alpha(a, b) = d * (previous.alpha(a, b) - 1.0) + counts(a, b) + 1.0;
            next.beta(a, b) = d * previous.beta(a, b) + batch.width() * mass(a, b);
        }
    }
    next.check();
    return next;
}

RatePosterior update_rates(const RatePosterior& previous, const Matrix& tau, const EventBatch& batch,
                           const EdgeSet& edges, double forgetting) {
    return update_rates(previous, tau, batch, edges, Matrix(tau.cols(), tau.cols(), forgetting));
}

MixturePosterior update_mixture(const MixturePosterior& previous, const Matrix& tau, double mixture_forgetting,
                                double membership_forgetting) {
    if (previous.gamma.size() != tau.cols()) {
        throw std::invalid_argument("update_mixture: group dimension mismatch");
    }
    const auto mass = column_sums(tau);
    MixturePosterior next{std::vector<double>(mass.size())};
    for (std::size_t k = 0; k < mass.size(); ++k) {
        next.gamma[k] = mixture_forgetting * (previous.gamma[k] - 1.0) + membership_forgetting * mass[k] + 1.0;
    }
    next.check();
    return next;
}

std::vector<double> dirichlet_log_prior(std::span<const double> gamma, double membership_forgetting) {
    const double total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
    const double psi_total = digamma(total);
    std::vector<double> out(gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        out[k] = membership_forgetting * (digamma(gamma[k]) - psi_total);
    }
    return out;
}

FixedPointReport update_memberships_fixed_point(Matrix& tau, const EventBatch& batch, const EdgeSet& edges,
                                                const RatePosterior& rates, std::span<const double> log_prior,
                                                const FixedPointOptions& options) {
    require_shapes(tau, batch, edges);
    const std::size_t n = tau.rows();
    const std::size_t k = tau.cols();
    if (rates.alpha.rows() != k || log_prior.size() != k) {
        throw std::invalid_argument("update_memberships_fixed_point: group dimension mismatch");
    }
    FixedPointReport report;
    if (k == 1) {
        tau.fill(1.0);
        report.converged = true;
        return report;
    }

    const double width = batch.width();
    Matrix log_rate(k, k);  // E[log lambda]
    Matrix mean_rate(k, k); // E[lambda]
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            log_rate(a, b) = digamma(rates.alpha(a, b)) - std::log(rates.beta(a, b));
            mean_rate(a, b) = rates.alpha(a, b) / rates.beta(a, b);
        }
    }

    std::vector<double> totals = column_sums(tau);
    std::vector<double> out_cnt(k), in_cnt(k), out_m(k), in_m(k), logits(k);
    double previous_residual = std::numeric_limits<double>::infinity();
    for (std::size_t sweep = 0; sweep < options.max_iters; ++sweep) {
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(out_cnt.begin(), out_cnt.end(), 0.0);
            std::fill(in_cnt.begin(), in_cnt.end(), 0.0);
            for (const auto& e : batch.out_edges(i)) {
                const double w = edges.weight(i, e.node) * e.count;
                if (w == 0.0) {
                    continue;
                }
                auto r = tau.row(e.node);
                for (std::size_t m = 0; m < k; ++m) {
                    out_cnt[m] += w * r[m];
                }
            }
            for (const auto& e : batch.in_edges(i)) {
                const double w = edges.weight(e.node, i) * e.count;
                if (w == 0.0) {
                    continue;
                }
                auto r = tau.row(e.node);
                for (std::size_t m = 0; m < k; ++m) {
                    in_cnt[m] += w * r[m];
                }
            }
            out_mass(tau, edges, totals, i, out_m);
            in_mass(tau, edges, totals, i, in_m);

            const double self_weight = edges.weight(i, i);
            const double self_count = self_weight == 0.0 ? 0.0 : batch.count(i, i);
            auto row = tau.row(i);
            for (std::size_t a = 0; a < k; ++a) {
                double v = log_prior[a];
                for (std::size_t m = 0; m < k; ++m) {
                    v += out_cnt[m] * log_rate(a, m) - width * out_m[m] * mean_rate(a, m);
                    v += in_cnt[m] * log_rate(m, a) - width * in_m[m] * mean_rate(m, a);
                }
                // The (j = i, m = a) pair is excluded from the neighbour sums and the
                // self-loop contributes once on its own.
                const double self = self_weight * (self_count * log_rate(a, a) - width * mean_rate(a, a));
                v += (1.0 - 2.0 * row[a]) * self;
                logits[a] = v;
            }
            normalize_log_weights(logits);
            for (std::size_t a = 0; a < k; ++a) {
                if (!std::isfinite(logits[a])) {
                    throw NumericalError("membership update produced a non-finite probability");
                }
                residual = std::max(residual, std::abs(logits[a] - row[a]));
                totals[a] += logits[a] - row[a];
                row[a] = logits[a];
            }
        }
        report.iterations = sweep + 1;
        report.residual = residual;
        if (residual > previous_residual) {
            ++report.residual_increases;
        }
        previous_residual = residual;
        if (residual < options.tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

} // namespace netcpd
