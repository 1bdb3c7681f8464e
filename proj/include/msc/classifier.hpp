#pragma once

#include "msc/common.hpp"
#include "msc/data.hpp"
#include "msc/graph.hpp"
#include "msc/statdist.hpp"
#include "msc/subspace.hpp"

#include <optional>
#include <string_view>

namespace msc {

enum class Method { masc, lp, msm, kmsm, kld };

std::string_view method_name(Method method);
/// Throws ConfigError for unknown names.
Method parse_method(std::string_view name);

/// Every knob any of the five classifiers reads.
struct ClassifierConfig {
    int k = 5;
    graph::SigmaPolicy sigma = graph::MedianSigma{};
    double mu = 1.0;
    int q = subspace::kDefaultDimension;
    /// Unset: the graph sigma policy applied to all samples of the dataset.
    std::optional<double> sigma_kernel;
    int similarity_top = 1;
    double energy_cutoff = stat::kDefaultEnergyCutoff;
    stat::Divergence divergence = stat::Divergence::symmetric;
    int threads = 0;

    void validate() const;
};

/// Classifies the dataset's observation set. Scores are q(p) for MASC, vote
/// counts for LP, similarities for MSM/KMSM and divergences for KLD.
SetDecision classify_dataset(const data::Dataset& dataset, Method method, const ClassifierConfig& config);

}  // namespace msc
