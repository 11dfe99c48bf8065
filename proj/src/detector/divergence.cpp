#include "netcpd/detector/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netcpd/core/special.hpp"

namespace netcpd {

double kl_gamma(GammaParams p1, GammaParams p2) {
    if (!(p1.shape > 0.0 && p1.rate > 0.0 && p2.shape > 0.0 && p2.rate > 0.0)) {
        throw std::invalid_argument("kl_gamma: parameters must be positive");
    }
    const double kl = p2.shape * std::log(p1.rate / p2.rate) - (log_gamma(p1.shape) - log_gamma(p2.shape)) +
                      (p1.shape - p2.shape) * digamma(p1.shape) - (p1.rate - p2.rate) * p1.shape / p1.rate;
    return std::max(kl, 0.0);
}

double js_categorical(std::span<const double> q1, std::span<const double> q2) {
    if (q1.size() != q2.size()) {
        throw std::invalid_argument("js_categorical: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < q1.size(); ++i) {
        const double mid = 0.5 * (q1[i] + q2[i]);
        if (q1[i] > 0.0) {
            total += q1[i] * std::log(q1[i] / mid);
        }
        if (q2[i] > 0.0) {
            total += q2[i] * std::log(q2[i] / mid);
        }
    }
    return std::clamp(0.5 * total, 0.0, std::log(2.0));
}

} // namespace netcpd
