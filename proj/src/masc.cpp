#include "msc/masc.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace msc::masc {

LabelMatrix one_hot(std::span<const ClassId> labels, int classes) {
    if (classes < 1) throw ConfigError("class count must be >= 1");
    LabelMatrix Y = LabelMatrix::Zero(static_cast<Eigen::Index>(labels.size()), classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= classes) throw LabelError("label outside 1..c");
        Y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return Y;
}

LabelMatrix build_z(ClassId p, const LabelMatrix& labeled_block, Eigen::Index observations) {
    const Eigen::Index c = labeled_block.cols();
    if (p < 0 || p >= c)
        throw ConfigError("class hypothesis " + std::to_string(p + 1) + " outside 1.." + std::to_string(c));
    LabelMatrix Z = LabelMatrix::Zero(labeled_block.rows() + observations, c);
    Z.topRows(labeled_block.rows()) = labeled_block;
    Z.bottomRows(observations).col(p).setOnes();
    return Z;
}

LambdaVector::LambdaVector(Vector weights) : weights_(std::move(weights)) {
    int ones = 0;
    for (Eigen::Index p = 0; p < weights_.size(); ++p) {
        if (weights_(p) == 1.0)
            ++ones;
        else if (weights_(p) != 0.0)
            throw ConfigError("lambda entries must be 0 or 1");
    }
    if (ones != 1) throw ConfigError("lambda must have exactly one nonzero entry");
}

LambdaVector LambdaVector::unit(ClassId p, int classes) {
    if (p < 0 || p >= classes) throw ConfigError("class index outside 1..c");
    Vector w = Vector::Zero(classes);
    w(p) = 1.0;
    return LambdaVector(std::move(w));
}

ClassId LambdaVector::active_class() const {
    Eigen::Index idx = 0;
    weights_.maxCoeff(&idx);
    return static_cast<ClassId>(idx);
}

LabelMatrix combine(const LambdaVector& lambda, const LabelMatrix& labeled_block, Eigen::Index observations) {
    const Eigen::Index c = labeled_block.cols();
    if (lambda.weights().size() != c) throw DimensionError("lambda length differs from class count");
    LabelMatrix M = LabelMatrix::Zero(labeled_block.rows() + observations, c);
    for (Eigen::Index p = 0; p < c; ++p)
        if (lambda.weights()(p) != 0.0)
            M += lambda.weights()(p) * build_z(static_cast<ClassId>(p), labeled_block, observations);
    return M;
}

double full_smoothness(const SparseMatrix& S, const LabelMatrix& M) {
    if (S.rows() != M.rows() || S.cols() != M.rows()) throw DimensionError("S and M sizes disagree");
    double total = 0.0;
    for (Eigen::Index j = 0; j < S.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(S, j); it; ++it)
            total += it.value() * (M.row(it.row()) - M.row(j)).squaredNorm();
    return 0.5 * total;
}

SmoothnessBlocks partitioned_smoothness(const SparseMatrix& S, const LabelMatrix& M, Eigen::Index labeled) {
    if (S.rows() != M.rows() || S.cols() != M.rows()) throw DimensionError("S and M sizes disagree");
    SmoothnessBlocks b;
    for (Eigen::Index j = 0; j < S.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(S, j); it; ++it) {
            const Eigen::Index i = it.row();
            const double term = 0.5 * it.value() * (M.row(i) - M.row(j)).squaredNorm();
            if (i < labeled && j < labeled)
                b.labeled_labeled += term;
            else if (i >= labeled && j >= labeled)
                b.unlabeled_unlabeled += term;
            else if (i < labeled)
                b.labeled_unlabeled += term;
            else
                b.unlabeled_labeled += term;
        }
    }
    return b;
}

double labeled_constant(const SparseMatrix& S, const LabelMatrix& labeled_block) {
    const Eigen::Index l = labeled_block.rows();
    double total = 0.0;
    for (Eigen::Index j = 0; j < l; ++j)
        for (SparseMatrix::InnerIterator it(S, j); it; ++it)
            if (it.row() < l) total += it.value() * (labeled_block.row(it.row()) - labeled_block.row(j)).squaredNorm();
    return 0.5 * total;
}

double interface_smoothness(const SparseMatrix& S, const LabelMatrix& labeled_block, const LambdaVector& lambda) {
    const Eigen::Index l = labeled_block.rows();
    if (lambda.weights().size() != labeled_block.cols()) throw DimensionError("lambda length differs from class count");
    if (S.rows() < l) throw DimensionError("S smaller than the labeled block");
    const auto lam = lambda.weights().transpose();
    double labeled_to_unlabeled = 0.0;
    double unlabeled_to_labeled = 0.0;
    for (Eigen::Index j = 0; j < S.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(S, j); it; ++it) {
            const Eigen::Index i = it.row();
            if (i < l && j >= l)
                labeled_to_unlabeled += it.value() * (labeled_block.row(i) - lam).squaredNorm();
            else if (i >= l && j < l)
                unlabeled_to_labeled += it.value() * (labeled_block.row(j) - lam).squaredNorm();
        }
    }
    return 0.5 * labeled_to_unlabeled + 0.5 * unlabeled_to_labeled;
}

ClassScores argmin_scores(Vector q) {
    auto pick = pick_min(std::move(q));
    return {std::move(pick.scores), pick.decision, pick.tie};
}

namespace {

struct LabelRow {
    double squared_norm = 0.0;
    std::vector<std::pair<Eigen::Index, double>> nonzeros;
};

// sum over interface entries of s * ||Y_i - e_p||^2
//   = sum s * (||Y_i||^2 + 1) - 2 * sum s * Y_ip
ClassScores score_interface(const SparseMatrix& S, std::span<const LabelRow> rows, Eigen::Index classes,
                            Eigen::Index observations) {
    const auto l = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n = l + observations;
    if (S.rows() != n || S.cols() != n) throw DimensionError("S must be (l+m) x (l+m)");
    if (observations < 1) throw DataError("m >= 1 required");

    double base = 0.0;
    Vector overlap = Vector::Zero(classes);
    auto accumulate = [&](double s, Eigen::Index labeled_row) {
        const auto& r = rows[static_cast<std::size_t>(labeled_row)];
        base += s * (r.squared_norm + 1.0);
        for (const auto& [p, y] : r.nonzeros) overlap(p) += s * y;
    };
    // Unlabeled column, labeled row.
    for (Eigen::Index j = l; j < n; ++j)
        for (SparseMatrix::InnerIterator it(S, j); it && it.row() < l; ++it) accumulate(it.value(), it.row());
    // Labeled column, unlabeled row.
    for (Eigen::Index j = 0; j < l; ++j)
        for (SparseMatrix::InnerIterator it(S, j); it; ++it)
            if (it.row() >= l) accumulate(it.value(), j);

    Vector q(classes);
    for (Eigen::Index p = 0; p < classes; ++p) q(p) = std::max(0.0, base - 2.0 * overlap(p));
    return argmin_scores(std::move(q));
}

}  // namespace

ClassScores classify(const SparseMatrix& S, const LabelMatrix& labeled_block, Eigen::Index observations) {
    std::vector<LabelRow> rows(static_cast<std::size_t>(labeled_block.rows()));
    for (Eigen::Index i = 0; i < labeled_block.rows(); ++i) {
        auto& r = rows[static_cast<std::size_t>(i)];
        r.squared_norm = labeled_block.row(i).squaredNorm();
        for (Eigen::Index p = 0; p < labeled_block.cols(); ++p)
            if (labeled_block(i, p) != 0.0) r.nonzeros.emplace_back(p, labeled_block(i, p));
    }
    return score_interface(S, rows, labeled_block.cols(), observations);
}

ClassScores classify(const SparseMatrix& S, std::span<const ClassId> labels, int classes, Eigen::Index observations) {
    if (classes < 1) throw ConfigError("class count must be >= 1");
    std::vector<LabelRow> rows(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= classes) throw LabelError("label outside 1..c");
        rows[i].squared_norm = 1.0;
        rows[i].nonzeros.emplace_back(labels[i], 1.0);
    }
    return score_interface(S, rows, classes, observations);
}

}  // namespace msc::masc
