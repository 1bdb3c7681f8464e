#pragma once

#include "msc/common.hpp"

#include <span>

namespace msc::stat {

inline constexpr double kDefaultEnergyCutoff = 0.96;

struct GaussianModel {
    Vector mean;
    Matrix covariance;       // symmetric positive definite after regularization
    int retained = 0;        // leading eigen-directions kept exactly
    double retained_energy = 0.0;  // their share of the original trace
};

/// Sample mean and unbiased covariance. The smallest number of leading
/// eigenvalues reaching `energy_cutoff` of the trace is kept; the rest are
/// replaced by their mean, floored at 1e-8 times the largest eigenvalue.
GaussianModel fit_gaussian(const Matrix& X, double energy_cutoff = kDefaultEnergyCutoff);

/// KL(g1 || g2) in closed form via Cholesky factors.
double kl_gaussian(const GaussianModel& g1, const GaussianModel& g2);

enum class Divergence { symmetric, test_to_class, class_to_test };

/// Argmin over classes of the chosen divergence between the test-set
/// Gaussian and each class Gaussian.
SetDecision kld_classify(std::span<const Matrix> train_sets, const Matrix& test_set,
                         double energy_cutoff = kDefaultEnergyCutoff, Divergence mode = Divergence::symmetric);

}  // namespace msc::stat
