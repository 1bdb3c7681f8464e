#include "msc/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace msc::subspace {

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

void check_dimension(const Matrix& X, int q) {
    const Eigen::Index n = X.cols();
    if (n < 2) throw DataError("subspace needs at least 2 samples in the set");
    const Eigen::Index limit = std::min<Eigen::Index>(X.rows(), n - 1);
    if (q < 1 || q > limit)
        throw ConfigError("subspace dimension q=" + std::to_string(q) + " outside 1.." + std::to_string(limit) +
                          " for a set of " + std::to_string(n) + " samples in dimension " +
                          std::to_string(X.rows()));
}

// Eigen pairs sorted descending.
struct TopEigen {
    Vector values;
    Matrix vectors;
};

TopEigen top_eigen(const Matrix& symmetric, int q) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
    const Eigen::Index n = symmetric.rows();
    TopEigen out{Vector(q), Matrix(n, q)};
    for (int i = 0; i < q; ++i) {
        out.values(i) = es.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

}  // namespace

Subspace pca_subspace(const Matrix& X, int q) {
    check_dimension(X, q);
    const Eigen::Index n = X.cols();
    Subspace s;
    s.mean = X.rowwise().mean();
    const Matrix centered = X.colwise() - s.mean;
    const double norm = 1.0 / static_cast<double>(n - 1);

    if (n < X.rows()) {
        auto eig = top_eigen(centered.transpose() * centered, q);
        const double floor = 1e-12 * std::max(eig.values(0), 0.0);
        s.basis.resize(X.rows(), q);
        for (int i = 0; i < q; ++i) {
            if (!(eig.values(i) > floor))
                throw DataError("set spans fewer than q=" + std::to_string(q) + " directions");
            s.basis.col(i) = centered * eig.vectors.col(i) / std::sqrt(eig.values(i));
        }
        s.eigenvalues = eig.values * norm;
    } else {
        auto eig = top_eigen(norm * centered * centered.transpose(), q);
        s.basis = std::move(eig.vectors);
        s.eigenvalues = std::move(eig.values);
    }
    for (int i = 0; i < q; ++i) fix_sign(s.basis.col(i));
    return s;
}

Vector principal_cosines(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) throw DimensionError("subspaces live in different dimensions");
    Eigen::JacobiSVD<Matrix> svd(A.transpose() * B);
    return svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
}

Vector principal_angles(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) throw DimensionError("subspaces live in different dimensions");
    // Keep the larger subspace as A so the residual of B has min(q_A, q_B) columns.
    const Matrix& big = A.cols() >= B.cols() ? A : B;
    const Matrix& small = A.cols() >= B.cols() ? B : A;
    const Vector cosines = principal_cosines(big, small);
    Eigen::JacobiSVD<Matrix> residual(small - big * (big.transpose() * small));
    Vector sines = residual.singularValues().cwiseMin(1.0);
    std::sort(sines.data(), sines.data() + sines.size());

    Vector angles(cosines.size());
    for (Eigen::Index i = 0; i < cosines.size(); ++i) {
        const double c = cosines(i);
        angles(i) = (c * c >= 0.5) ? std::asin(sines(i)) : std::acos(c);
    }
    std::sort(angles.data(), angles.data() + angles.size());
    return angles;
}

double similarity_from_cosines(const Vector& cosines, int top) {
    if (top < 1) throw ConfigError("similarity needs top >= 1");
    const Eigen::Index t = std::min<Eigen::Index>(top, cosines.size());
    if (t == 0) return 0.0;
    return cosines.head(t).squaredNorm() / static_cast<double>(t);
}

double msm_similarity(const Subspace& A, const Subspace& B, int top) {
    return similarity_from_cosines(principal_cosines(A.basis, B.basis), top);
}

SetDecision msm_classify(std::span<const Matrix> train_sets, const Matrix& test_set, int q, int top) {
    if (train_sets.empty()) throw DataError("no training classes");
    const Subspace test = pca_subspace(test_set, q);
    Vector sim(static_cast<Eigen::Index>(train_sets.size()));
    for (std::size_t c = 0; c < train_sets.size(); ++c)
        sim(static_cast<Eigen::Index>(c)) = msm_similarity(pca_subspace(train_sets[c], q), test, top);
    return pick_max(std::move(sim));
}

// ---------------------------------------------------------------------------

Kernel gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("kernel sigma must be > 0");
    const double scale = 1.0 / (2.0 * sigma * sigma);
    return [scale](Eigen::Ref<const Vector> x, Eigen::Ref<const Vector> y) {
        return std::exp(-(x - y).squaredNorm() * scale);
    };
}

Matrix kernel_matrix(const Matrix& X, const Kernel& kernel) {
    const Eigen::Index n = X.cols();
    Matrix K(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        K(j, j) = kernel(X.col(j), X.col(j));
        for (Eigen::Index i = j + 1; i < n; ++i) K(i, j) = K(j, i) = kernel(X.col(i), X.col(j));
    }
    return K;
}

Matrix kernel_matrix(const Matrix& X, double sigma) {
    return kernel_matrix(X, gaussian_kernel(sigma));
}

Matrix cross_kernel(const Matrix& A, const Matrix& B, const Kernel& kernel) {
    if (A.rows() != B.rows()) throw DimensionError("sets live in different dimensions");
    Matrix K(A.cols(), B.cols());
    for (Eigen::Index j = 0; j < B.cols(); ++j)
        for (Eigen::Index i = 0; i < A.cols(); ++i) K(i, j) = kernel(A.col(i), B.col(j));
    return K;
}

Matrix center_kernel(const Matrix& K) {
    const Vector row_means = K.rowwise().mean();
    const Eigen::RowVectorXd col_means = K.colwise().mean();
    const double mean = K.mean();
    Matrix C = K;
    C.colwise() -= row_means;
    C.rowwise() -= col_means;
    C.array() += mean;
    return C;
}

Vector KernelSubspace::project(const Vector& x) const {
    Vector k(samples.cols());
    for (Eigen::Index a = 0; a < samples.cols(); ++a) k(a) = kernel(samples.col(a), x);
    const double k_mean = k.mean();
    const Vector centered = (k - kernel_row_means).array() - k_mean + kernel_mean;
    return coefficients.transpose() * centered;
}

KernelSubspace kpca_subspace(const Matrix& X, int q, Kernel kernel) {
    const Eigen::Index n = X.cols();
    if (n < 2) throw DataError("kernel subspace needs at least 2 samples in the set");
    if (q < 1 || q > n - 1)
        throw ConfigError("kernel subspace dimension q=" + std::to_string(q) + " outside 1.." + std::to_string(n - 1));
    const Matrix K = kernel_matrix(X, kernel);
    auto eig = top_eigen(center_kernel(K), q);

    KernelSubspace s;
    const double floor = 1e-12 * std::max(eig.values(0), 0.0);
    s.coefficients.resize(n, q);
    for (int i = 0; i < q; ++i) {
        if (!(eig.values(i) > floor))
            throw NumericalError("non-positive retained kernel eigenvalue at component " + std::to_string(i + 1));
        Vector v = eig.vectors.col(i);
        fix_sign(v);
        s.coefficients.col(i) = v / std::sqrt(eig.values(i));
    }
    s.samples = X;
    s.eigenvalues = std::move(eig.values);
    s.kernel_row_means = K.rowwise().mean();
    s.kernel_mean = K.mean();
    s.kernel = std::move(kernel);
    return s;
}

Vector kernel_principal_cosines(const KernelSubspace& A, const KernelSubspace& B) {
    // <phi(a) - mu_A, phi(b) - mu_B> = k(a,b) - mean_a' k(a',b) - mean_b' k(a,b') + mean k
    Matrix K = cross_kernel(A.samples, B.samples, A.kernel);
    const Vector row_means = K.rowwise().mean();
    const Eigen::RowVectorXd col_means = K.colwise().mean();
    const double mean = K.mean();
    K.colwise() -= row_means;
    K.rowwise() -= col_means;
    K.array() += mean;
    Eigen::JacobiSVD<Matrix> svd(A.coefficients.transpose() * K * B.coefficients);
    return svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
}

SetDecision kmsm_classify(std::span<const Matrix> train_sets, const Matrix& test_set, int q, double sigma_kernel,
                          int top) {
    if (train_sets.empty()) throw DataError("no training classes");
    const Kernel kernel = gaussian_kernel(sigma_kernel);
    const KernelSubspace test = kpca_subspace(test_set, q, kernel);
    Vector sim(static_cast<Eigen::Index>(train_sets.size()));
    for (std::size_t c = 0; c < train_sets.size(); ++c) {
        const KernelSubspace cls = kpca_subspace(train_sets[c], q, kernel);
        sim(static_cast<Eigen::Index>(c)) = similarity_from_cosines(kernel_principal_cosines(cls, test), top);
    }
    return pick_max(std::move(sim));
}

}  // namespace msc::subspace
