#include "netcpd/inference/alignment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace netcpd {

std::vector<std::size_t> align_labels(std::span<const std::size_t> estimated, std::span<const std::size_t> reference,
                                      std::size_t estimated_groups, std::size_t reference_groups) {
    if (estimated.size() != reference.size()) {
        throw std::invalid_argument("align_labels: length mismatch");
    }
    const std::size_t width = std::max(estimated_groups, reference_groups);
    std::vector<std::vector<std::size_t>> confusion(width, std::vector<std::size_t>(width, 0));
    for (std::size_t i = 0; i < estimated.size(); ++i) {
        if (estimated[i] >= estimated_groups || reference[i] >= reference_groups) {
            throw std::invalid_argument("align_labels: label out of range");
        }
        ++confusion[estimated[i]][reference[i]];
    }

    std::vector<std::size_t> mapping(width);
    std::iota(mapping.begin(), mapping.end(), 0);
    if (width <= 7) {
        std::vector<std::size_t> perm = mapping;
        std::size_t best = 0;
        bool first = true;
        do {
            std::size_t score = 0;
            for (std::size_t a = 0; a < width; ++a) {
                score += confusion[a][perm[a]];
            }
            if (first || score > best) {
                best = score;
                mapping = perm;
                first = false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::vector<bool> used_est(width, false), used_ref(width, false);
        for (std::size_t round = 0; round < width; ++round) {
            std::size_t best_a = width, best_b = width, best = 0;
            for (std::size_t a = 0; a < width; ++a) {
                for (std::size_t b = 0; b < width; ++b) {
                    if (!used_est[a] && !used_ref[b] && (best_a == width || confusion[a][b] > best)) {
                        best = confusion[a][b];
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            used_est[best_a] = used_ref[best_b] = true;
            mapping[best_a] = best_b;
        }
    }
    mapping.resize(estimated_groups);
    return mapping;
}

} // namespace netcpd
