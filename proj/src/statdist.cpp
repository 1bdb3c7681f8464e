#include "msc/statdist.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace msc::stat {

GaussianModel fit_gaussian(const Matrix& X, double energy_cutoff) {
    if (!(energy_cutoff > 0.0 && energy_cutoff <= 1.0)) throw ConfigError("energy cutoff must lie in (0, 1]");
    const Eigen::Index n = X.cols();
    const Eigen::Index d = X.rows();
    if (n < 2) throw DataError("Gaussian fit needs at least 2 samples");

    GaussianModel g;
    g.mean = X.rowwise().mean();
    const Matrix centered = X.colwise() - g.mean;
    g.covariance = centered * centered.transpose() / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> es(g.covariance);
    if (es.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
    // Descending, with round-off negatives clipped.
    const Vector values = es.eigenvalues().reverse().cwiseMax(0.0);
    const Matrix vectors = es.eigenvectors().rowwise().reverse();
    const double trace = values.sum();
    if (!(trace > 0.0)) throw DataError("set has zero variance");

    const double target = energy_cutoff * trace * (1.0 - 1e-12);
    double cumulative = 0.0;
    Eigen::Index kept = 0;
    while (kept < d && cumulative < target) cumulative += values(kept++);
    g.retained = static_cast<int>(kept);
    g.retained_energy = cumulative / trace;
    if (kept == d) return g;

    const double discarded_mean = values.tail(d - kept).mean();
    const double fill = std::max(discarded_mean, 1e-8 * values(0));
    Vector regularized = values;
    regularized.tail(d - kept).setConstant(fill);
    g.covariance = vectors * regularized.asDiagonal() * vectors.transpose();
    g.covariance = 0.5 * (g.covariance + g.covariance.transpose()).eval();
    return g;
}

double kl_gaussian(const GaussianModel& g1, const GaussianModel& g2) {
    const Eigen::Index d = g1.mean.size();
    if (g2.mean.size() != d || g1.covariance.rows() != d || g2.covariance.rows() != d)
        throw DimensionError("Gaussians live in different dimensions");
    Eigen::LLT<Matrix> l2(g2.covariance);
    Eigen::LLT<Matrix> l1(g1.covariance);
    if (l2.info() != Eigen::Success || l1.info() != Eigen::Success)
        throw NumericalError("covariance is not positive definite");

    const Matrix& L2 = l2.matrixL();
    const Matrix& L1 = l1.matrixL();
    // tr(S2^{-1} S1) = ||L2^{-1} L1||_F^2
    const Matrix W = l2.matrixL().solve(L1);
    const Vector z = l2.matrixL().solve(g2.mean - g1.mean);
    const double logdet2 = 2.0 * L2.diagonal().array().log().sum();
    const double logdet1 = 2.0 * L1.diagonal().array().log().sum();
    const double kl = 0.5 * (W.squaredNorm() + z.squaredNorm() - static_cast<double>(d) + logdet2 - logdet1);
    return std::max(kl, 0.0);
}

SetDecision kld_classify(std::span<const Matrix> train_sets, const Matrix& test_set, double energy_cutoff,
                         Divergence mode) {
    if (train_sets.empty()) throw DataError("no training classes");
    const GaussianModel test = fit_gaussian(test_set, energy_cutoff);
    Vector div(static_cast<Eigen::Index>(train_sets.size()));
    for (std::size_t c = 0; c < train_sets.size(); ++c) {
        const GaussianModel cls = fit_gaussian(train_sets[c], energy_cutoff);
        double value = 0.0;
        switch (mode) {
            case Divergence::symmetric: value = 0.5 * (kl_gaussian(test, cls) + kl_gaussian(cls, test)); break;
            case Divergence::test_to_class: value = kl_gaussian(test, cls); break;
            case Divergence::class_to_test: value = kl_gaussian(cls, test); break;
        }
        div(static_cast<Eigen::Index>(c)) = value;
    }
    return pick_min(std::move(div));
}

}  // namespace msc::stat
