#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "essumm/features.hpp"

namespace essumm {

// k-means centroids learned over the frames of one recording.
struct Codebook {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<double> centroids;  // k x dim, row-major
    double inertia = 0.0;
    std::uint64_t seed = 0;
    // Inertia after every assignment step, first entry is the k-means++ seeding.
    std::vector<double> inertia_trace;
    std::size_t iterations = 0;

    std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }
};

// Pseudo-phoneme ids of one segment, one per frame.
struct ClusterSequence {
    std::vector<std::uint32_t> ids;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
};

struct KMeansParams {
    std::size_t k = 32;
    std::uint64_t seed = 0;
    std::size_t max_iters = 300;
    double rel_tol = 1e-6;
    std::size_t n_init = 10;  // independent k-means++ starts; the lowest final inertia wins
};

// n_init runs of k-means++ seeding plus Lloyd iterations, keeping the run with the lowest
// final inertia (earliest on ties). A run stops when the relative inertia improvement drops
// below rel_tol or after max_iters updates. Ties go to the lowest centroid index; an empty
// cluster is moved onto the frame farthest from its centroid.
// Throws InsufficientDataError when there are fewer frames than clusters.
Codebook fit_kmeans(const FeatureMatrix& frames, const KMeansParams& params);

// Nearest centroid by squared Euclidean distance, lowest index on ties.
std::uint32_t nearest_centroid(const Codebook& cb, std::span<const double> x, double* sq_dist = nullptr);

ClusterSequence quantize(const FeatureMatrix& fm, const Codebook& cb);

// Debug dump: {k, dim, seed, inertia, centroids}.
std::string codebook_json(const Codebook& cb);

}  // namespace essumm
