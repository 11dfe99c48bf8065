#pragma once

#include <span>

namespace netcpd {

double digamma(double x);
double log_gamma(double x);

/// Replaces `logits` in place by softmax(logits), subtracting the maximum
/// before exponentiating.
void normalize_log_weights(std::span<double> logits);

} // namespace netcpd
