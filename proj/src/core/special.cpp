#include "netcpd/core/special.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace netcpd {

double digamma(double x) { return boost::math::digamma(x); }

double log_gamma(double x) { return boost::math::lgamma(x); }

void normalize_log_weights(std::span<double> logits) {
    if (logits.empty()) {
        return;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& v : logits) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : logits) {
        v /= total;
    }
}

} // namespace netcpd
