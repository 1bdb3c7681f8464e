#include "msc/classifier.hpp"

#include "msc/labelprop.hpp"
#include "msc/masc.hpp"

#include <cmath>

namespace msc {

std::string_view method_name(Method method) {
    switch (method) {
        case Method::masc: return "masc";
        case Method::lp: return "lp";
        case Method::msm: return "msm";
        case Method::kmsm: return "kmsm";
        case Method::kld: return "kld";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::masc, Method::lp, Method::msm, Method::kmsm, Method::kld})
        if (method_name(m) == name) return m;
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected masc|lp|msm|kmsm|kld)");
}

void ClassifierConfig::validate() const {
    graph::GraphConfig{k, sigma, threads}.validate();
    lp::LPConfig{mu};
    if (q < 1) throw ConfigError("q must be >= 1");
    if (sigma_kernel && !(*sigma_kernel > 0.0 && std::isfinite(*sigma_kernel)))
        throw ConfigError("sigma-kernel must be > 0");
    if (similarity_top < 1) throw ConfigError("similarity top must be >= 1");
    if (!(energy_cutoff > 0.0 && energy_cutoff <= 1.0)) throw ConfigError("energy cutoff must lie in (0, 1]");
}

SetDecision classify_dataset(const data::Dataset& dataset, Method method, const ClassifierConfig& config) {
    config.validate();
    const auto m = static_cast<Eigen::Index>(dataset.observation_count());

    switch (method) {
        case Method::masc:
        case Method::lp: {
            const Matrix X = dataset.sample_matrix();
            const auto g = graph::build_knn_graph(X, {config.k, config.sigma, config.threads});
            const auto labels = dataset.anchored_labels();
            if (method == Method::masc) {
                auto scores = masc::classify(g.similarity, labels, dataset.classes(), m);
                return {scores.decision, std::move(scores.q), scores.tie};
            }
            Matrix Y = Matrix::Zero(g.n, dataset.classes());
            Y.topRows(static_cast<Eigen::Index>(labels.size())) = masc::one_hot(labels, dataset.classes());
            const Matrix M = lp::lp_solve(g.similarity, Y, lp::LPConfig{config.mu});
            Vector votes;
            const ClassId decision = lp::lp_classify_majority(M, m, &votes);
            const bool tie = (votes.array() == votes(decision)).count() > 1;
            return {decision, std::move(votes), tie};
        }
        case Method::msm:
            return subspace::msm_classify(dataset.class_sets(), dataset.observation_matrix(), config.q,
                                          config.similarity_top);
        case Method::kmsm: {
            const double sigma =
                config.sigma_kernel ? *config.sigma_kernel : graph::estimate_sigma(dataset.sample_matrix(), config.sigma);
            return subspace::kmsm_classify(dataset.class_sets(), dataset.observation_matrix(), config.q, sigma,
                                           config.similarity_top);
        }
        case Method::kld:
            return stat::kld_classify(dataset.class_sets(), dataset.observation_matrix(), config.energy_cutoff,
                                      config.divergence);
    }
    throw ConfigError("unhandled classifier");
}

}  // namespace msc
