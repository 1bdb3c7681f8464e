#include "msc/labelprop.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace msc::lp {

LPConfig::LPConfig(double mu) : mu_(mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be > 0");
}

double lp_cost(const SparseMatrix& H, const Vector& degrees, const Matrix& M, const Matrix& Y, double mu) {
    if (M.rows() != H.rows() || Y.rows() != M.rows() || Y.cols() != M.cols() || degrees.size() != H.rows())
        throw DimensionError("lp_cost operands disagree in size");
    double smooth = 0.0;
    for (Eigen::Index j = 0; j < H.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(H, j); it; ++it) {
            const Eigen::Index i = it.row();
            if (i >= j) continue;
            smooth += it.value() *
                      (M.row(i) / std::sqrt(degrees(i)) - M.row(j) / std::sqrt(degrees(j))).squaredNorm();
        }
    return 0.5 * (smooth + mu * (M - Y).squaredNorm());
}

Matrix lp_solve(const SparseMatrix& S, const Matrix& Y, const LPConfig& config) {
    if (S.rows() != S.cols() || S.rows() != Y.rows()) throw DimensionError("S and Y sizes disagree");
    const Eigen::Index n = S.rows();
    Matrix A = Matrix::Identity(n, n) - config.alpha() * Matrix(S);
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) {
        Eigen::PartialPivLU<Matrix> lu(A);
        std::ostringstream msg;
        msg << "I - alpha S is not positive definite (reciprocal condition estimate " << lu.rcond() << ")";
        throw NumericalError(msg.str());
    }
    return config.beta() * config.mu() * llt.solve(Y);
}

FixedPointResult lp_fixed_point(const SparseMatrix& S, const Matrix& Y, const LPConfig& config, double tol,
                                int max_iterations) {
    if (S.rows() != S.cols() || S.rows() != Y.rows()) throw DimensionError("S and Y sizes disagree");
    const Matrix anchor = config.beta() * config.mu() * Y;
    FixedPointResult r;
    r.M = Y;
    for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
        Matrix next = config.alpha() * (S * r.M) + anchor;
        const double delta = (next - r.M).cwiseAbs().maxCoeff();
        r.M = std::move(next);
        if (delta <= tol) {
            r.converged = true;
            return r;
        }
    }
    r.iterations = max_iterations;
    return r;
}

ClassId lp_classify_majority(const Matrix& M, Eigen::Index observations, Vector* votes) {
    if (observations < 1 || observations > M.rows()) throw DataError("observation rows out of range");
    const Eigen::Index c = M.cols();
    Vector counts = Vector::Zero(c);
    for (Eigen::Index i = M.rows() - observations; i < M.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index p = 1; p < c; ++p)
            if (M(i, p) > M(i, best)) best = p;
        counts(best) += 1.0;
    }
    Eigen::Index winner = 0;
    for (Eigen::Index p = 1; p < c; ++p)
        if (counts(p) > counts(winner)) winner = p;
    if (votes) *votes = counts;
    return static_cast<ClassId>(winner);
}

}  // namespace msc::lp
