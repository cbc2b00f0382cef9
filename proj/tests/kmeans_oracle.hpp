#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace essumm::testing {

// Minimum within-cluster SSE over every assignment of n points to at most k labels.
// Exponential; only for n <= 12, k <= 3.
inline double brute_force_inertia(const std::vector<double>& pts, std::size_t n, std::size_t d, std::size_t k) {
    std::vector<std::size_t> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> sum(k * d);
    std::vector<std::size_t> cnt(k);
    for (;;) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(cnt.begin(), cnt.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++cnt[label[i]];
            for (std::size_t j = 0; j < d; ++j) sum[label[i] * d + j] += pts[i * d + j];
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = label[i];
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = pts[i * d + j] - sum[c * d + j] / static_cast<double>(cnt[c]);
                sse += diff * diff;
            }
        }
        if (sse < best) best = sse;
        // next assignment in base k; label[0] fixed to 0 removes one relabeling symmetry
        std::size_t pos = 1;
        while (pos < n && ++label[pos] == k) label[pos++] = 0;
        if (pos >= n) break;
    }
    return best;
}

}  // namespace essumm::testing
