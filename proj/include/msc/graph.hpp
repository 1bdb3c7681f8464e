#pragma once

#include "msc/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <variant>

namespace msc::graph {

struct FixedSigma {
    double value;
};

/// sigma = half the median pairwise distance over a random subsample.
struct MedianSigma {
    std::size_t sample_cap = 1000;
    std::uint64_t seed = 0;
};

using SigmaPolicy = std::variant<FixedSigma, MedianSigma>;

struct GraphConfig {
    int k = 5;
    SigmaPolicy sigma = MedianSigma{};
    /// Worker threads for the distance pass; 0 reads MSC_THREADS.
    int threads = 0;

    void validate() const;
};

/// Symmetric k-NN graph with Gaussian weights H, degrees D and the
/// normalized similarity S = D^{-1/2} H D^{-1/2}.
struct SimilarityGraph {
    Eigen::Index n = 0;
    double sigma = 0.0;
    SparseMatrix weights;     // H
    Vector degrees;           // diag(D)
    SparseMatrix similarity;  // S

    std::size_t edge_count() const { return static_cast<std::size_t>(weights.nonZeros()) / 2; }
};

/// Samples are the columns of X.
double estimate_sigma(const Matrix& X, const SigmaPolicy& policy);

/// Median of all pairwise Euclidean distances among the columns of X.
double median_pairwise_distance(const Matrix& X);

SimilarityGraph build_knn_graph(const Matrix& X, const GraphConfig& config);

/// Directed k-NN lists (self excluded, ties broken by smaller index), row i
/// holding the neighbors of column i in increasing distance order.
std::vector<std::vector<Eigen::Index>> knn_lists(const Matrix& X, int k, int threads = 0);

Vector degrees_of(const SparseMatrix& H);

/// S_ij = H_ij / sqrt(D_ii D_jj). Throws DataError naming any zero-degree node.
SparseMatrix normalize_similarity(const SparseMatrix& H, const Vector& degrees);

/// Edge list `i j H_ij`, 1-based, i < j, one edge per line.
void write_edge_list(std::ostream& out, const SimilarityGraph& graph);

}  // namespace msc::graph
