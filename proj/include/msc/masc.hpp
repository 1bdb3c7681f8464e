#pragma once

#include "msc/common.hpp"

#include <span>
#include <vector>

namespace msc::masc {

/// n x c label matrix with nonnegative entries.
using LabelMatrix = Matrix;

/// One-hot rows for the given 0-based labels.
LabelMatrix one_hot(std::span<const ClassId> labels, int classes);

/// Z_p: labeled block on top, every observation row set to e_p.
LabelMatrix build_z(ClassId p, const LabelMatrix& labeled_block, Eigen::Index observations);

/// Combination weights over the c class-conditional matrices; the feasible
/// set holds exactly the c canonical basis vectors.
class LambdaVector {
public:
    explicit LambdaVector(Vector weights);
    static LambdaVector unit(ClassId p, int classes);

    const Vector& weights() const { return weights_; }
    ClassId active_class() const;

private:
    Vector weights_;
};

/// M(lambda) = sum_p lambda_p Z_p.
LabelMatrix combine(const LambdaVector& lambda, const LabelMatrix& labeled_block, Eigen::Index observations);

/// Q(M) = 1/2 sum_ij S_ij ||M_i - M_j||^2 over every stored entry of S.
double full_smoothness(const SparseMatrix& S, const LabelMatrix& M);

/// The four blocks of Q(M) when the first `labeled` rows are labeled.
struct SmoothnessBlocks {
    double labeled_labeled = 0.0;      // Q1
    double unlabeled_unlabeled = 0.0;  // Q2
    double labeled_unlabeled = 0.0;    // Q3, i <= l < j
    double unlabeled_labeled = 0.0;    // Q4, j <= l < i

    double total() const { return labeled_labeled + unlabeled_unlabeled + labeled_unlabeled + unlabeled_labeled; }
};

SmoothnessBlocks partitioned_smoothness(const SparseMatrix& S, const LabelMatrix& M, Eigen::Index labeled);

/// The lambda-independent part of Q: 1/2 sum_{i,j <= l} S_ij ||Y_i - Y_j||^2.
double labeled_constant(const SparseMatrix& S, const LabelMatrix& labeled_block);

/// 1/2 sum_{i<=l<j} S_ij ||Y_i - lambda||^2 + 1/2 sum_{j<=l<i} S_ij ||Y_j - lambda||^2.
double interface_smoothness(const SparseMatrix& S, const LabelMatrix& labeled_block, const LambdaVector& lambda);

struct ClassScores {
    Vector q;               // one score per class, smaller is smoother
    ClassId decision = 0;   // argmin, smallest index among ties
    bool tie = false;       // another class reaches the minimum
};

/// Picks the smallest index among the entries within kTieTolerance of the minimum.
ClassScores argmin_scores(Vector q);

/// Algorithm scores q(p) = 2 * interface_smoothness(S, Y_l, e_p), computed
/// in one pass over the labeled/unlabeled interface entries of S. Nodes must
/// be ordered labeled first; the last `observations` rows are unlabeled.
ClassScores classify(const SparseMatrix& S, const LabelMatrix& labeled_block, Eigen::Index observations);

/// Same scores for one-hot labels given as class indices; O(|interface| + c).
ClassScores classify(const SparseMatrix& S, std::span<const ClassId> labels, int classes, Eigen::Index observations);

}  // namespace msc::masc
