#include "netcpd/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netcpd/core/event_batch.hpp"

namespace netcpd {

namespace {
double pairs(double n) { return n * (n - 1.0) / 2.0; }
} // namespace

double ari(std::span<const std::size_t> labels_a, std::span<const std::size_t> labels_b) {
    if (labels_a.size() != labels_b.size()) {
        throw std::invalid_argument("ari: length mismatch");
    }
    const std::size_t n = labels_a.size();
    if (n < 2) {
        return 1.0;
    }
    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    std::map<std::size_t, double> rows, cols;
    for (std::size_t i = 0; i < n; ++i) {
        cells[{labels_a[i], labels_b[i]}] += 1.0;
        rows[labels_a[i]] += 1.0;
        cols[labels_b[i]] += 1.0;
    }
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, c] : cells) {
        index += pairs(c);
    }
    for (const auto& [key, c] : rows) {
        sum_a += pairs(c);
    }
    for (const auto& [key, c] : cols) {
        sum_b += pairs(c);
    }
    const double expected = sum_a * sum_b / pairs(static_cast<double>(n));
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) {
        return 1.0; // both partitions trivial in the same way
    }
    return (index - expected) / (maximum - expected);
}

DetectionSummary ccd_dnf(const DetectionRecord& record) {
    if (!(record.interval > 0.0)) {
        throw std::invalid_argument("ccd_dnf: interval must be positive");
    }
    std::map<std::size_t, std::vector<std::size_t>> starts; // first responsive step per change
    std::map<std::size_t, std::vector<std::size_t>> flags;
    for (const auto& c : record.true_changes) {
        starts[c.target].push_back(step_after(c.time, record.interval));
    }
    for (const auto& f : record.flagged) {
        flags[f.target].push_back(f.step);
    }
    DetectionSummary out;
    auto score = [&](std::size_t target) -> DetectionScore& { return out.per_target[target]; };
    for (auto& [target, s] : starts) {
        std::sort(s.begin(), s.end());
        score(target).changes = s.size();
    }
    for (auto& [target, f] : flags) {
        std::sort(f.begin(), f.end());
        DetectionScore& sc = score(target);
        sc.detections = f.size();
        const auto it = starts.find(target);
        if (it == starts.end()) {
            continue;
        }
        const auto& s = it->second;
        for (std::size_t n = 0; n < s.size(); ++n) {
            const std::size_t end = n + 1 < s.size() ? s[n + 1] : std::numeric_limits<std::size_t>::max();
            const bool hit = std::any_of(f.begin(), f.end(), [&](std::size_t r) { return r >= s[n] && r < end; });
            if (hit) {
                ++sc.correct;
            }
        }
    }
    for (const auto& [target, sc] : out.per_target) {
        out.pooled.changes += sc.changes;
        out.pooled.detections += sc.detections;
        out.pooled.correct += sc.correct;
    }
    return out;
}

Matrix batch_average_rates(const StepFunction<Matrix>& truth, std::size_t step, double width) {
    const double lo = static_cast<double>(step - 1) * width;
    const double hi = static_cast<double>(step) * width;
    Matrix acc(truth.values.front().rows(), truth.values.front().cols(), 0.0);
    for (std::size_t s = 0; s < truth.values.size(); ++s) {
        const double seg_lo = std::max(lo, truth.times[s]);
        const double seg_hi = std::min(hi, s + 1 < truth.times.size() ? truth.times[s + 1] : hi);
        if (seg_hi <= seg_lo) {
            continue;
        }
        const double share = (seg_hi - seg_lo) / (hi - lo);
        for (std::size_t v = 0; v < acc.values().size(); ++v) {
            acc.values()[v] += share * truth.values[s].values()[v];
        }
    }
    return acc;
}

Matrix rate_rmse(std::span<const Matrix> posterior_means, const StepFunction<Matrix>& truth, double width,
                 std::size_t burn_in, std::span<const std::size_t> mapping) {
    if (posterior_means.empty()) {
        throw std::invalid_argument("rate_rmse: empty trace");
    }
    const std::size_t k = posterior_means.front().rows();
    const std::size_t truth_k = truth.values.front().rows();
    if (mapping.size() != k) {
        throw std::invalid_argument("rate_rmse: mapping must cover every estimated label");
    }
    if (posterior_means.size() <= burn_in) {
        throw std::invalid_argument("rate_rmse: trace shorter than the burn-in");
    }
    Matrix sq(k, k, 0.0);
    for (std::size_t r = burn_in + 1; r <= posterior_means.size(); ++r) {
        const Matrix& est = posterior_means[r - 1];
        if (est.rows() != k) {
            throw std::invalid_argument("rate_rmse: grid mismatch");
        }
        const Matrix target = batch_average_rates(truth, r, width);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                if (mapping[a] < truth_k && mapping[b] < truth_k) {
                    const double d = est(a, b) - target(mapping[a], mapping[b]);
                    sq(a, b) += d * d;
                }
            }
        }
    }
    const double count = static_cast<double>(posterior_means.size() - burn_in);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            sq(a, b) = (mapping[a] < truth_k && mapping[b] < truth_k) ? std::sqrt(sq(a, b) / count)
                                                                      : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return sq;
}

} // namespace netcpd
