#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "essumm/quantizer.hpp"
#include "essumm/segmenter.hpp"

namespace essumm {

// One weight per cluster id.
struct TfIdfVector {
    std::vector<double> weights;
};

// Principal subspace of the segment TF-IDF matrix.
struct LsaModel {
    std::vector<double> mean;          // length k
    std::vector<double> components;    // n_comp x k, orthonormal rows
    std::vector<double> eigenvalues;   // n_comp, non-increasing
    std::size_t n_comp = 0;
    std::size_t k = 0;

    std::span<const double> component(std::size_t i) const { return {components.data() + i * k, k}; }
};

struct ScoredSegment {
    Segment segment;
    double distance = 0.0;
    double score = 1.0;
};

// tf = count / |segment| (zero for empty segments), idf = ln((1 + N) / (1 + df)) + 1.
std::vector<TfIdfVector> tfidf(const std::vector<ClusterSequence>& sequences, std::size_t k);

struct EigenDecomposition {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // column j of the n x n row-major matrix is the j-th eigenvector
    std::size_t n = 0;
    std::size_t sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric n x n row-major matrix. Converged when the
// off-diagonal Frobenius norm is at most tol * ||A||_F; throws InvariantError after
// max_sweeps without convergence.
EigenDecomposition symmetric_eigen(std::vector<double> a, std::size_t n, double tol = 1e-12,
                                   std::size_t max_sweeps = 100);

// Centres by the column mean, forms the 1/(N-1) covariance, keeps the top n_comp
// eigenvectors. Each component's largest-magnitude entry is made positive.
LsaModel fit_pca(const std::vector<TfIdfVector>& vectors, std::size_t n_comp);

// Residual distance of each centred vector to the principal subspace, score = 1 / (1 + d).
std::vector<ScoredSegment> score_segments(const std::vector<TfIdfVector>& vectors,
                                          const LsaModel& model, const SegmentSet& segments);

// Debug dump: {mean, eigenvalues, components}.
std::string lsa_model_json(const LsaModel& model);

}  // namespace essumm
