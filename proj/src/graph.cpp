#include "msc/graph.hpp"

#include "msc/data.hpp"
#include "msc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

namespace msc::graph {

void GraphConfig::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1 (got " + std::to_string(k) + ")");
    if (const auto* fixed = std::get_if<FixedSigma>(&sigma)) {
        if (!(fixed->value > 0.0) || !std::isfinite(fixed->value))
            throw ConfigError("fixed sigma must be > 0");
    } else if (std::get<MedianSigma>(sigma).sample_cap < 2) {
        throw ConfigError("sigma sample cap must be >= 2");
    }
}

double median_pairwise_distance(const Matrix& X) {
    const Eigen::Index n = X.cols();
    if (n < 2) throw DataError("median distance needs at least 2 samples");
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) dist.push_back((X.col(i) - X.col(j)).norm());
    const std::size_t mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    const double upper = dist[mid];
    if (dist.size() % 2 == 1) return upper;
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double estimate_sigma(const Matrix& X, const SigmaPolicy& policy) {
    if (const auto* fixed = std::get_if<FixedSigma>(&policy)) {
        if (!(fixed->value > 0.0)) throw ConfigError("fixed sigma must be > 0");
        return fixed->value;
    }
    const auto& median = std::get<MedianSigma>(policy);
    if (median.sample_cap < 2) throw ConfigError("sigma sample cap must be >= 2");
    const auto n = static_cast<std::size_t>(X.cols());
    if (n < 2) throw DataError("sigma estimation needs at least 2 samples");

    double med = 0.0;
    if (n <= median.sample_cap) {
        med = median_pairwise_distance(X);
    } else {
        // Partial Fisher-Yates: first sample_cap slots are a uniform draw
        // without replacement.
        std::vector<Eigen::Index> index(n);
        std::iota(index.begin(), index.end(), Eigen::Index{0});
        Rng rng(median.seed);
        for (std::size_t i = 0; i < median.sample_cap; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(index[i], index[j]);
        }
        Matrix subset(X.rows(), static_cast<Eigen::Index>(median.sample_cap));
        for (std::size_t i = 0; i < median.sample_cap; ++i) subset.col(static_cast<Eigen::Index>(i)) = X.col(index[i]);
        med = median_pairwise_distance(subset);
    }
    if (!(med > 0.0)) throw DataError("zero median distance: samples are identical");
    return 0.5 * med;
}

std::vector<std::vector<Eigen::Index>> knn_lists(const Matrix& X, int k, int threads) {
    const Eigen::Index n = X.cols();
    if (k < 1) throw ConfigError("k must be >= 1");
    if (n < k + 1)
        throw ConfigError("k-NN graph needs n >= k+1 (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    const auto kk = static_cast<std::size_t>(k);
    std::vector<std::vector<Eigen::Index>> lists(static_cast<std::size_t>(n));

    parallel_for(static_cast<std::size_t>(n), threads > 0 ? threads : default_thread_count(), [&](std::size_t row) {
        const auto i = static_cast<Eigen::Index>(row);
        std::vector<std::pair<double, Eigen::Index>> cand;
        cand.reserve(static_cast<std::size_t>(n - 1));
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) cand.emplace_back((X.col(i) - X.col(j)).squaredNorm(), j);
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
        auto& out = lists[row];
        out.reserve(kk);
        for (std::size_t t = 0; t < kk; ++t) out.push_back(cand[t].second);
    });
    return lists;
}

Vector degrees_of(const SparseMatrix& H) {
    Vector d = Vector::Zero(H.cols());
    for (Eigen::Index col = 0; col < H.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(H, col); it; ++it) d(col) += it.value();
    return d;
}

SparseMatrix normalize_similarity(const SparseMatrix& H, const Vector& degrees) {
    if (degrees.size() != H.cols()) throw DimensionError("degree vector does not match H");
    for (Eigen::Index i = 0; i < degrees.size(); ++i)
        if (!(degrees(i) > 0.0)) throw DataError("node " + std::to_string(i + 1) + " has zero degree");
    SparseMatrix S = H;
    for (Eigen::Index col = 0; col < S.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(S, col); it; ++it)
            it.valueRef() = it.value() / std::sqrt(degrees(it.row()) * degrees(col));
    return S;
}

SimilarityGraph build_knn_graph(const Matrix& X, const GraphConfig& config) {
    config.validate();
    const Eigen::Index n = X.cols();
    const auto lists = knn_lists(X, config.k, config.threads);
    const double sigma = estimate_sigma(X, config.sigma);

    // OR-symmetrization: keep (i, j) if either endpoint lists the other.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    pairs.reserve(lists.size() * static_cast<std::size_t>(config.k));
    for (std::size_t i = 0; i < lists.size(); ++i)
        for (Eigen::Index j : lists[i]) {
            const auto a = static_cast<Eigen::Index>(i);
            pairs.emplace_back(std::min(a, j), std::max(a, j));
        }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    const double scale = 1.0 / (2.0 * sigma * sigma);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * pairs.size());
    for (const auto& [i, j] : pairs) {
        const double w = std::exp(-(X.col(i) - X.col(j)).squaredNorm() * scale);
        triplets.emplace_back(i, j, w);
        triplets.emplace_back(j, i, w);
    }

    SimilarityGraph g;
    g.n = n;
    g.sigma = sigma;
    g.weights.resize(n, n);
    g.weights.setFromTriplets(triplets.begin(), triplets.end());
    g.degrees = degrees_of(g.weights);
    g.similarity = normalize_similarity(g.weights, g.degrees);
    return g;
}

void write_edge_list(std::ostream& out, const SimilarityGraph& graph) {
    for (Eigen::Index col = 0; col < graph.weights.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(graph.weights, col); it; ++it)
            if (it.row() > col)
                out << col + 1 << ' ' << it.row() + 1 << ' ' << data::format_real(it.value()) << '\n';
}

}  // namespace msc::graph
