#include "netcpd/detector/mad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace netcpd {

double median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty set");
    }
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    if (v.size() % 2 == 1) {
        return v[mid];
    }
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lower + upper);
}

double median_absolute_deviation(std::span<const double> values) {
    const double m = median(values);
    std::vector<double> dev(values.size());
    std::transform(values.begin(), values.end(), dev.begin(), [m](double x) { return std::abs(x - m); });
    return median(dev);
}

bool mad_outlier(std::span<const double> window, double candidate, double threshold) {
    const double m = median(window);
    return std::abs(candidate - m) > threshold * median_absolute_deviation(window);
}

} // namespace netcpd
