#pragma once

#include "msc/common.hpp"

#include <functional>
#include <span>

namespace msc::subspace {

/// Number of principal components kept per set unless configured otherwise.
inline constexpr int kDefaultDimension = 9;

/// Orthonormal basis of a set's principal subspace.
struct Subspace {
    Matrix basis;         // d x q, orthonormal columns
    Vector eigenvalues;   // covariance eigenvalues of the kept directions, descending
    Vector mean;
};

/// Top-q eigenvectors of the mean-centered covariance (1/(n-1)). Uses the
/// n x n Gram matrix when the set has fewer samples than dimensions. Each
/// basis vector has its largest-magnitude entry positive.
Subspace pca_subspace(const Matrix& X, int q);

/// Cosines of the principal angles, descending, clamped to [0, 1].
Vector principal_cosines(const Matrix& A, const Matrix& B);

/// Principal angles in [0, pi/2], ascending; min(q_A, q_B) of them. Small
/// angles come from the sines of the residual (I - A A^T) B so that
/// coincident subspaces give angles near machine precision.
Vector principal_angles(const Matrix& A, const Matrix& B);

/// Mean of the top `top` squared cosines; top = 1 gives cos^2 theta_1.
double similarity_from_cosines(const Vector& cosines, int top = 1);

double msm_similarity(const Subspace& A, const Subspace& B, int top = 1);

/// One subspace per training class and one for the test set; argmax similarity.
SetDecision msm_classify(std::span<const Matrix> train_sets, const Matrix& test_set, int q, int top = 1);

// ---------------------------------------------------------------------------
// Kernel variant

using Kernel = std::function<double(Eigen::Ref<const Vector>, Eigen::Ref<const Vector>)>;

/// k(x, y) = exp(-||x - y||^2 / (2 sigma^2)).
Kernel gaussian_kernel(double sigma);

/// Gaussian Gram matrix of the columns of X.
Matrix kernel_matrix(const Matrix& X, double sigma);
Matrix kernel_matrix(const Matrix& X, const Kernel& kernel);
Matrix cross_kernel(const Matrix& A, const Matrix& B, const Kernel& kernel);

/// K - 1K - K1 + 1K1 with 1 the averaging matrix.
Matrix center_kernel(const Matrix& K);

/// Kernel principal subspace of one set. Basis vector i in feature space is
/// sum_a coefficients(a, i) * (phi(x_a) - mean phi), unit length.
struct KernelSubspace {
    Matrix samples;
    Matrix coefficients;     // n x q
    Vector eigenvalues;      // of the centered kernel matrix, descending
    Vector kernel_row_means;
    double kernel_mean = 0.0;
    Kernel kernel;

    /// Coordinates of phi(x) - mean phi on the basis.
    Vector project(const Vector& x) const;
};

KernelSubspace kpca_subspace(const Matrix& X, int q, Kernel kernel);

/// Principal-angle cosines between two kernel subspaces sharing one kernel.
Vector kernel_principal_cosines(const KernelSubspace& A, const KernelSubspace& B);

SetDecision kmsm_classify(std::span<const Matrix> train_sets, const Matrix& test_set, int q, double sigma_kernel,
                          int top = 1);

}  // namespace msc::subspace
