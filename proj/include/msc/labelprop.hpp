#pragma once

#include "msc/common.hpp"

namespace msc::lp {

/// Fitness weight mu with the derived alpha = 1/(1+mu), beta = mu/(1+mu).
class LPConfig {
public:
    explicit LPConfig(double mu = 1.0);

    double mu() const { return mu_; }
    double alpha() const { return 1.0 / (1.0 + mu_); }
    double beta() const { return mu_ / (1.0 + mu_); }

private:
    double mu_;
};

/// 1/2 (sum_ij H_ij ||M_i/sqrt(D_ii) - M_j/sqrt(D_jj)||^2 + mu sum_i ||M_i - Y_i||^2),
/// with the smoothness sum taken once per undirected edge. Its minimizer is
/// beta (I - alpha S)^{-1} Y, which equals lp_solve() at mu = 1.
double lp_cost(const SparseMatrix& H, const Vector& degrees, const Matrix& M, const Matrix& Y, double mu);

/// M* = beta * mu * (I - alpha S)^{-1} Y, by dense Cholesky.
///
/// The coefficient is the printed beta*mu rather than the (1 - alpha) of the
/// usual label-propagation form; both are positive, so every argmax matches.
/// Unlabeled rows of Y are zero.
Matrix lp_solve(const SparseMatrix& S, const Matrix& Y, const LPConfig& config);

struct FixedPointResult {
    Matrix M;
    int iterations = 0;
    bool converged = false;
};

/// Iterates M <- alpha S M + beta mu Y from M = Y until the max-abs update
/// falls below tol.
FixedPointResult lp_fixed_point(const SparseMatrix& S, const Matrix& Y, const LPConfig& config, double tol = 1e-12,
                                int max_iterations = 10000);

/// Row-wise argmax over the last m rows, then plurality; both levels break
/// ties toward the smaller class index.
ClassId lp_classify_majority(const Matrix& M, Eigen::Index observations, Vector* votes = nullptr);

}  // namespace msc::lp
