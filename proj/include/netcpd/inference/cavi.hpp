#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netcpd/core/edge_set.hpp"
#include "netcpd/core/event_batch.hpp"
#include "netcpd/core/matrix.hpp"
#include "netcpd/core/model.hpp"

namespace netcpd {

/// M_km = sum over (i, j) of w_ij tau_ik tau_jm.
Matrix pair_mass(const Matrix& tau, const EdgeSet& edges);

/// C_km = sum over (i, j) of w_ij x_ij tau_ik tau_jm.
Matrix pair_counts(const Matrix& tau, const EventBatch& batch, const EdgeSet& edges);

/// Tempered gamma update with one forgetting factor per block:
///   alpha = d (alpha_prev - 1) + C + 1,  beta = d beta_prev + width * M.
RatePosterior update_rates(const RatePosterior& previous, const Matrix& tau, const EventBatch& batch,
                           const EdgeSet& edges, const Matrix& forgetting);
RatePosterior update_rates(const RatePosterior& previous, const Matrix& tau, const EventBatch& batch,
                           const EdgeSet& edges, double forgetting);

/// gamma_k = d_pi (gamma_prev_k - 1) + d_z sum_i tau_ik + 1.
MixturePosterior update_mixture(const MixturePosterior& previous, const Matrix& tau, double mixture_forgetting,
                                double membership_forgetting);

/// Per-group log prior d_z [psi(gamma_k) - psi(sum gamma)].
std::vector<double> dirichlet_log_prior(std::span<const double> gamma, double membership_forgetting);

struct FixedPointReport {
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;                 // max |tau change| over the last sweep
    std::size_t residual_increases = 0;    // sweeps whose residual exceeded the previous one
};

/// Row-wise fixed point for the membership probabilities. Nodes are swept in
/// order 0..N-1, each row recomputed from the current rows of every other node
/// and normalised; sweeps repeat until the largest entry change is below
/// `options.tol` or `options.max_iters` sweeps have run. `tau` is updated in
/// place (warm start). Non-convergence is reported, not thrown.
FixedPointReport update_memberships_fixed_point(Matrix& tau, const EventBatch& batch, const EdgeSet& edges,
                                                const RatePosterior& rates, std::span<const double> log_prior,
                                                const FixedPointOptions& options);

} // namespace netcpd
