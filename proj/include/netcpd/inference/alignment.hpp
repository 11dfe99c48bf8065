#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace netcpd {

/// Maps each estimated label to a reference label by maximising agreement in
/// the confusion matrix: exhaustive search over assignments when the label
/// count is small (<= 7), greedy largest-cell matching otherwise. Estimated
/// labels beyond the reference label count map to values >= reference_groups.
/// Offline evaluation only; the engines never relabel.
std::vector<std::size_t> align_labels(std::span<const std::size_t> estimated, std::span<const std::size_t> reference,
                                      std::size_t estimated_groups, std::size_t reference_groups);

} // namespace netcpd
