#include "msc/subspace.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace msc;
using namespace msc::subspace;

namespace {

Matrix random_rotation(Eigen::Index q, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(oracle::gaussian_matrix(q, q, rng));
    return qr.householderQ();
}

// n samples in span(directions) plus isotropic noise.
Matrix sample_plane(const Matrix& directions, Eigen::Index n, double noise, Rng& rng) {
    const Matrix coeffs = oracle::gaussian_matrix(directions.cols(), n, rng);
    Matrix X = directions * coeffs + noise * oracle::gaussian_matrix(directions.rows(), n, rng);
    return X;
}

Matrix covariance(const Matrix& X) {
    const Matrix C = X.colwise() - X.rowwise().mean();
    return C * C.transpose() / static_cast<double>(X.cols() - 1);
}

Matrix permute_columns(const Matrix& X, Rng& rng) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(X.cols()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    Matrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = X.col(idx[i]);
    return out;
}

}  // namespace

TEST_SUITE("pca") {
    TEST_CASE("basis is orthonormal with a fixed sign convention") {
        Rng rng(1);
        for (auto [d, n] : std::vector<std::pair<int, int>>{{10, 20}, {30, 12}, {5, 6}}) {
            const Matrix X = oracle::gaussian_matrix(d, n, rng);
            const int q = std::min(d, n - 1);
            const auto s = pca_subspace(X, q);
            REQUIRE(s.basis.cols() == q);
            CHECK((s.basis.transpose() * s.basis - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() <= 1e-10);
            for (Eigen::Index i = 0; i < q; ++i) {
                Eigen::Index at = 0;
                s.basis.col(i).cwiseAbs().maxCoeff(&at);
                CHECK(s.basis(at, i) > 0.0);
            }
        }
    }

    TEST_CASE("eigenvalues match the Jacobi oracle on 10 x 20 sets") {
        Rng rng(2);
        for (int t = 0; t < 10; ++t) {
            const Matrix X = oracle::gaussian_matrix(10, 20, rng);
            const auto s = pca_subspace(X, 9);
            const Vector ref = oracle::jacobi_eigenvalues(covariance(X));
            CHECK((s.eigenvalues - ref.head(9)).cwiseAbs().maxCoeff() <= 1e-8);
            // Gram-matrix path for the transposed shape
            const Matrix Y = oracle::gaussian_matrix(20, 10, rng);
            const auto g = pca_subspace(Y, 9);
            const Vector gref = oracle::jacobi_eigenvalues(covariance(Y));
            CHECK((g.eigenvalues - gref.head(9)).cwiseAbs().maxCoeff() <= 1e-8);
            // the basis spans the covariance eigenvectors: C B = B diag(ev)
            const Matrix C = covariance(Y);
            CHECK((C * g.basis - g.basis * g.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }

    TEST_CASE("points on an offset line give the line direction") {
        Vector dir(3);
        dir << 1.0, 2.0, -2.0;
        dir.normalize();
        Vector offset(3);
        offset << 5.0, -1.0, 4.0;
        Matrix X(3, 7);
        for (int i = 0; i < 7; ++i) X.col(i) = offset + (i - 3.0) * 0.8 * dir;
        const auto s = pca_subspace(X, 1);
        CHECK(std::abs(s.basis.col(0).dot(dir)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((s.mean - offset).norm() <= 1e-12);
    }

    TEST_CASE("q too large is a config error") {
        Rng rng(3);
        const Matrix X = oracle::gaussian_matrix(5, 4, rng);
        CHECK_THROWS_AS(pca_subspace(X, 4), ConfigError);
        CHECK_THROWS_AS(pca_subspace(oracle::gaussian_matrix(3, 10, rng), 4), ConfigError);
        CHECK_THROWS_AS(pca_subspace(oracle::gaussian_matrix(3, 1, rng), 1), DataError);
        CHECK_THROWS_AS(pca_subspace(X, 0), ConfigError);
    }
}

TEST_SUITE("principal angles") {
    TEST_CASE("identical subspaces have zero angles") {
        Rng rng(4);
        const Matrix A = pca_subspace(oracle::gaussian_matrix(8, 12, rng), 3).basis;
        const Vector angles = principal_angles(A, A);
        CHECK(angles.cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(msm_similarity(Subspace{A, {}, {}}, Subspace{A, {}, {}}) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("e1 versus e2 is a right angle") {
        const Matrix e1 = Matrix::Identity(3, 3).col(0);
        const Matrix e2 = Matrix::Identity(3, 3).col(1);
        const Vector angles = principal_angles(e1, e2);
        REQUIRE(angles.size() == 1);
        CHECK(std::abs(angles(0) - std::numbers::pi / 2) <= 1e-10);
        CHECK(similarity_from_cosines(principal_cosines(e1, e2)) == 0.0);
    }

    TEST_CASE("planes sharing a line meet at the dihedral angle") {
        for (double phi : {0.1, 0.7, 1.2, std::numbers::pi / 2}) {
            Matrix A = Matrix::Zero(3, 2);
            A(0, 0) = 1.0;
            A(1, 1) = 1.0;
            Matrix B = Matrix::Zero(3, 2);
            B(0, 0) = 1.0;
            B(1, 1) = std::cos(phi);
            B(2, 1) = std::sin(phi);
            const Vector angles = principal_angles(A, B);
            REQUIRE(angles.size() == 2);
            CHECK(angles(0) <= 1e-10);
            CHECK(std::abs(angles(1) - phi) <= 1e-10);
            // cross-check with the singular values of A^T B
            Eigen::JacobiSVD<Matrix> svd(A.transpose() * B);
            CHECK(std::abs(std::cos(angles(1)) - svd.singularValues()(1)) <= 1e-10);
        }
    }

    TEST_CASE("cosines lie in [0, 1], angles ascend, count is min(qA, qB)") {
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            const Matrix A = pca_subspace(oracle::gaussian_matrix(10, 8, rng), 2 + t % 4).basis;
            const Matrix B = pca_subspace(oracle::gaussian_matrix(10, 8, rng), 1 + t % 6).basis;
            const Vector c = principal_cosines(A, B);
            const Vector a = principal_angles(A, B);
            REQUIRE(c.size() == std::min(A.cols(), B.cols()));
            REQUIRE(a.size() == c.size());
            CHECK(c.minCoeff() >= 0.0);
            CHECK(c.maxCoeff() <= 1.0);
            for (Eigen::Index i = 1; i < a.size(); ++i) CHECK(a(i) >= a(i - 1));
            CHECK(a.minCoeff() >= 0.0);
            CHECK(a.maxCoeff() <= std::numbers::pi / 2 + 1e-15);
        }
    }

    TEST_CASE("similarity is symmetric and ignores basis rotations") {
        Rng rng(6);
        for (int t = 0; t < 20; ++t) {
            const auto A = pca_subspace(oracle::gaussian_matrix(12, 9, rng), 4);
            const auto B = pca_subspace(oracle::gaussian_matrix(12, 9, rng), 3);
            const double ab = msm_similarity(A, B);
            CHECK(std::abs(ab - msm_similarity(B, A)) <= 1e-12);
            Subspace Ar = A;
            Ar.basis = A.basis * random_rotation(4, rng);
            Subspace Br = B;
            Br.basis = B.basis * random_rotation(3, rng);
            CHECK(std::abs(ab - msm_similarity(Ar, Br)) <= 1e-10);
            CHECK(std::abs(msm_similarity(A, B, 3) - msm_similarity(Ar, Br, 3)) <= 1e-10);
        }
    }

    TEST_CASE("top-t similarity averages squared cosines") {
        Vector c(3);
        c << 0.9, 0.5, 0.1;
        CHECK(similarity_from_cosines(c, 1) == doctest::Approx(0.81));
        CHECK(similarity_from_cosines(c, 2) == doctest::Approx((0.81 + 0.25) / 2));
        CHECK_THROWS_AS(similarity_from_cosines(c, 0), ConfigError);
    }
}

TEST_SUITE("msm classify") {
    TEST_CASE("a training set is assigned its own class") {
        Rng rng(7);
        std::vector<Matrix> train;
        for (int j = 0; j < 4; ++j) train.push_back(oracle::gaussian_matrix(15, 12, rng));
        for (int j = 0; j < 4; ++j) {
            const auto d = msm_classify(train, train[static_cast<std::size_t>(j)], 5);
            CHECK(d.decision == j);
            CHECK(d.scores(j) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    TEST_CASE("orthogonal coordinate planes") {
        Rng rng(8);
        const Matrix I = Matrix::Identity(4, 4);
        const std::vector<Matrix> train{sample_plane(I.leftCols(2), 20, 0.0, rng), sample_plane(I.rightCols(2), 20, 0.0, rng)};
        const Matrix test = sample_plane(I.rightCols(2), 15, 0.0, rng);
        const auto d = msm_classify(train, test, 1);
        CHECK(d.decision == 1);
        CHECK(d.scores(0) <= 1e-20 + 1e-12);
    }

    TEST_CASE("permuting the class order permutes the decision") {
        Rng rng(9);
        for (int t = 0; t < 10; ++t) {
            std::vector<Matrix> train;
            for (int j = 0; j < 3; ++j) train.push_back(oracle::gaussian_matrix(6, 10, rng));
            const Matrix test = train[1] + 0.3 * oracle::gaussian_matrix(6, 10, rng);
            const auto a = msm_classify(train, test, 2);
            std::vector<Matrix> rev(train.rbegin(), train.rend());
            const auto b = msm_classify(rev, test, 2);
            CHECK(b.decision == 2 - a.decision);
        }
    }
}

TEST_SUITE("kernel") {
    TEST_CASE("unit diagonal, e^-1 at distance sigma sqrt 2, PSD") {
        Rng rng(10);
        for (int t = 0; t < 10; ++t) {
            const Matrix X = oracle::gaussian_matrix(4, 10 + 4 * t, rng);
            const Matrix K = kernel_matrix(X, 1.3);
            CHECK(K.diagonal() == Vector::Ones(K.rows()));
            CHECK(K == K.transpose());
            CHECK(oracle::jacobi_eigenvalues(K).minCoeff() >= -1e-10);
        }
        Matrix two(1, 2);
        two << 0.0, 1.3 * std::sqrt(2.0);
        CHECK(kernel_matrix(two, 1.3)(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }

    TEST_CASE("centered kernel columns sum to zero") {
        Rng rng(11);
        const Matrix Kc = center_kernel(kernel_matrix(oracle::gaussian_matrix(3, 17, rng), 0.8));
        CHECK(Kc.colwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(Kc.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    }

    TEST_CASE("feature-space Gram of the basis is the identity") {
        Rng rng(12);
        for (int t = 0; t < 10; ++t) {
            const Matrix X = oracle::gaussian_matrix(5, 15, rng);
            const auto ks = kpca_subspace(X, 6, gaussian_kernel(1.5));
            const Matrix Kc = center_kernel(kernel_matrix(X, 1.5));
            const Matrix G = ks.coefficients.transpose() * Kc * ks.coefficients;
            CHECK((G - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK((kernel_principal_cosines(ks, ks).array() - 1.0).abs().maxCoeff() <= 1e-8);
        }
    }

    TEST_CASE("linear-kernel KPCA projections equal PCA projections up to sign") {
        Rng rng(13);
        for (int t = 0; t < 20; ++t) {
            const Matrix X = oracle::gaussian_matrix(6, 12, rng);
            const auto pca = pca_subspace(X, 4);
            const auto kp = kpca_subspace(X, 4, oracle::linear_kernel());
            for (int probe = 0; probe < 5; ++probe) {
                const Vector x = oracle::gaussian_matrix(6, 1, rng).col(0);
                const Vector a = pca.basis.transpose() * (x - pca.mean);
                const Vector b = kp.project(x);
                CHECK((a.cwiseAbs() - b.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-8);
            }
        }
    }

    TEST_CASE("non-positive retained eigenvalues are rejected") {
        Matrix X(2, 4);
        X << 0, 1, 2, 3, 0, 1, 2, 3;  // collinear: one nonzero linear eigenvalue
        CHECK_THROWS_AS(kpca_subspace(X, 2, oracle::linear_kernel()), NumericalError);
        CHECK_THROWS_AS(kpca_subspace(X, 4, gaussian_kernel(1.0)), ConfigError);
    }
}

TEST_SUITE("kmsm classify") {
    TEST_CASE("a training set is assigned its own class") {
        Rng rng(14);
        std::vector<Matrix> train;
        for (int j = 0; j < 3; ++j) train.push_back(oracle::gaussian_matrix(8, 10, rng) + 4.0 * j * Matrix::Ones(8, 10));
        for (int j = 0; j < 3; ++j) CHECK(kmsm_classify(train, train[static_cast<std::size_t>(j)], 4, 2.0).decision == j);
    }

    TEST_CASE("very large sigma reproduces the MSM decision") {
        Rng rng(15);
        int agree = 0;
        for (int t = 0; t < 20; ++t) {
            const Matrix I = Matrix::Identity(6, 6);
            std::vector<Matrix> train{sample_plane(I.leftCols(2), 14, 0.2, rng), sample_plane(I.middleCols(2, 2), 14, 0.2, rng),
                                      sample_plane(I.rightCols(2), 14, 0.2, rng)};
            const Matrix test = sample_plane(I.middleCols(2, 2), 10, 0.2, rng);
            const auto msm = msm_classify(train, test, 2);
            const auto kmsm = kmsm_classify(train, test, 2, 1e3);
            agree += msm.decision == kmsm.decision;
            CHECK((msm.scores - kmsm.scores).cwiseAbs().maxCoeff() <= 1e-4);
        }
        CHECK(agree == 20);
    }

    TEST_CASE("sample order inside a set does not matter") {
        Rng rng(16);
        for (int t = 0; t < 5; ++t) {
            std::vector<Matrix> train;
            for (int j = 0; j < 3; ++j) train.push_back(oracle::gaussian_matrix(5, 9, rng) + 1.5 * j * Matrix::Ones(5, 9));
            const Matrix test = train[2].leftCols(6) + 0.1 * oracle::gaussian_matrix(5, 6, rng);
            const auto a = kmsm_classify(train, test, 3, 2.0);
            std::vector<Matrix> shuffled;
            for (const auto& s : train) shuffled.push_back(permute_columns(s, rng));
            const auto b = kmsm_classify(shuffled, permute_columns(test, rng), 3, 2.0);
            CHECK(a.decision == b.decision);
            CHECK((a.scores - b.scores).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}
