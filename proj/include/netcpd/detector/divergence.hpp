#pragma once

#include <span>

#include "netcpd/core/model.hpp"

namespace netcpd {

/// KL(Gamma(a1, b1) || Gamma(a2, b2)) in shape/rate parametrisation.
/// Throws std::invalid_argument for non-positive parameters.
double kl_gamma(GammaParams p1, GammaParams p2);

/// Jensen-Shannon divergence between two categorical distributions, using
/// 0 log 0 = 0. Result lies in [0, log 2].
double js_categorical(std::span<const double> q1, std::span<const double> q2);

} // namespace netcpd
