#pragma once

#include <span>

namespace netcpd {

double median(std::span<const double> values);

/// Median absolute deviation from the median.
double median_absolute_deviation(std::span<const double> values);

/// True iff |candidate - median(window)| > threshold * MAD(window). Ties are
/// not outliers. Throws std::invalid_argument on an empty window.
bool mad_outlier(std::span<const double> window, double candidate, double threshold);

} // namespace netcpd
