#include "msc/eval.hpp"

#include "msc/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace msc::eval {

double error_rate(std::span<const std::pair<ClassId, ClassId>> decisions) {
    if (decisions.empty()) throw DataError("error rate of an empty decision list");
    std::size_t wrong = 0;
    for (const auto& [predicted, truth] : decisions)
        if (predicted != truth) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(decisions.size());
}

double session_metric(const Matrix& pair_errors) {
    const Eigen::Index s = pair_errors.rows();
    if (s < 2 || pair_errors.cols() != s) throw DataError("session metric needs a square table of >= 2 sessions");
    double total = 0.0;
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
            if (i != j) total += pair_errors(i, j);
    return total / static_cast<double>(s * (s - 1));
}

TrialReport summarize(std::string classifier, std::size_t m, std::uint64_t seed, std::span<const int> wrong_per_trial,
                      int decisions_per_trial) {
    if (wrong_per_trial.empty() || decisions_per_trial < 1) throw DataError("nothing to summarize");
    TrialReport r;
    r.m = m;
    r.classifier = std::move(classifier);
    r.seed = seed;
    r.trials = static_cast<int>(wrong_per_trial.size());
    const long total = std::accumulate(wrong_per_trial.begin(), wrong_per_trial.end(), 0L);
    r.mean_error = static_cast<double>(total) / (static_cast<double>(r.trials) * decisions_per_trial);
    double sq = 0.0;
    for (int w : wrong_per_trial) {
        const double e = static_cast<double>(w) / decisions_per_trial;
        r.trial_errors.push_back(e);
        sq += (e - r.mean_error) * (e - r.mean_error);
    }
    r.std_error = r.trials > 1 ? std::sqrt(sq / (r.trials - 1)) : 0.0;
    return r;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t m, int trial, ClassId cls) {
    std::uint64_t s = mix_seed(master, static_cast<std::uint64_t>(m));
    s = mix_seed(s, static_cast<std::uint64_t>(trial));
    return mix_seed(s, static_cast<std::uint64_t>(cls));
}

std::vector<TrialReport> observation_sweep(const SweepSpec& spec) {
    if (spec.m_values.empty()) throw ConfigError("m_values must be nonempty");
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");
    if (spec.classes < 1) throw ConfigError("sweep needs at least one class");
    if (spec.methods.empty()) throw ConfigError("sweep needs at least one classifier");
    if (!spec.factory) throw ConfigError("sweep needs a dataset factory");
    spec.config.validate();

    const std::size_t n_m = spec.m_values.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    const auto classes = static_cast<std::size_t>(spec.classes);
    const std::size_t n_methods = spec.methods.size();
    const std::size_t tasks = n_m * trials * classes;
    // wrong[task * n_methods + method] = 1 when misclassified
    std::vector<char> wrong(tasks * n_methods, 0);

    const int threads = spec.threads > 0 ? spec.threads : default_thread_count();
    ClassifierConfig inner = spec.config;
    inner.threads = 1;  // parallelism lives at the trial level

    parallel_for(tasks, threads, [&](std::size_t task) {
        const std::size_t mi = task / (trials * classes);
        const std::size_t t = (task / classes) % trials;
        const auto cls = static_cast<ClassId>(task % classes);
        const std::size_t m = spec.m_values[mi];
        const std::uint64_t seed = trial_seed(spec.seed, m, static_cast<int>(t), cls);
        const data::Dataset ds = spec.factory(cls, m, seed);
        ClassifierConfig cfg = inner;
        if (auto* median = std::get_if<graph::MedianSigma>(&cfg.sigma)) median->seed = mix_seed(seed, 0x5167);
        for (std::size_t k = 0; k < n_methods; ++k) {
            const auto decision = classify_dataset(ds, spec.methods[k], cfg);
            wrong[task * n_methods + k] = decision.decision != cls ? 1 : 0;
        }
    });

    std::vector<TrialReport> reports;
    for (std::size_t mi = 0; mi < n_m; ++mi) {
        for (std::size_t k = 0; k < n_methods; ++k) {
            std::vector<int> per_trial(trials, 0);
            for (std::size_t t = 0; t < trials; ++t)
                for (std::size_t c = 0; c < classes; ++c) {
                    const std::size_t task = (mi * trials + t) * classes + c;
                    per_trial[t] += wrong[task * n_methods + k];
                }
            reports.push_back(summarize(std::string(method_name(spec.methods[k])), spec.m_values[mi], spec.seed,
                                        per_trial, spec.classes));
        }
    }
    return reports;
}

// ---------------------------------------------------------------------------

namespace {

data::Dataset assemble(std::span<const Matrix> train_sets, const Matrix& observations) {
    std::vector<data::LabeledSample> labeled;
    for (std::size_t c = 0; c < train_sets.size(); ++c)
        for (Eigen::Index j = 0; j < train_sets[c].cols(); ++j)
            labeled.push_back({train_sets[c].col(j), static_cast<ClassId>(c)});
    std::vector<Vector> obs;
    for (Eigen::Index j = 0; j < observations.cols(); ++j) obs.emplace_back(observations.col(j));
    return data::Dataset(std::move(labeled), {}, std::move(obs), static_cast<int>(train_sets.size()));
}

std::vector<Matrix> resampled(std::span<const Matrix> sets, std::size_t step) {
    std::vector<Matrix> out;
    out.reserve(sets.size());
    for (const auto& s : sets) out.push_back(data::resample_columns(s, step));
    return out;
}

}  // namespace

SessionResult run_sessions(std::span<const Session> sessions, Method method, const ClassifierConfig& config,
                           std::size_t step, int threads) {
    const auto s = static_cast<Eigen::Index>(sessions.size());
    if (s < 2) throw DataError("session protocol needs >= 2 sessions");
    const std::size_t classes = sessions.front().size();
    for (const auto& session : sessions)
        if (session.size() != classes) throw DataError("sessions disagree on the class set");
    config.validate();

    std::vector<std::vector<Matrix>> thinned;
    for (const auto& session : sessions) thinned.push_back(resampled(session, step));

    // task = (ordered pair, class)
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
            if (i != j) pairs.emplace_back(i, j);
    std::vector<char> wrong(pairs.size() * classes, 0);
    ClassifierConfig inner = config;
    inner.threads = 1;
    parallel_for(wrong.size(), threads > 0 ? threads : default_thread_count(), [&](std::size_t task) {
        const auto [i, j] = pairs[task / classes];
        const auto cls = static_cast<ClassId>(task % classes);
        const auto ds = assemble(thinned[static_cast<std::size_t>(i)], thinned[static_cast<std::size_t>(j)][static_cast<std::size_t>(cls)]);
        wrong[task] = classify_dataset(ds, method, inner).decision != cls ? 1 : 0;
    });

    SessionResult r;
    r.classifier = std::string(method_name(method));
    r.step = step;
    r.pair_errors = Matrix::Zero(s, s);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        int count = 0;
        for (std::size_t c = 0; c < classes; ++c) count += wrong[p * classes + c];
        r.pair_errors(pairs[p].first, pairs[p].second) = static_cast<double>(count) / static_cast<double>(classes);
    }
    r.mean_error = session_metric(r.pair_errors);
    return r;
}

TrialReport run_random_split(std::span<const Matrix> class_sets, std::size_t train_per_class, int repeats,
                             std::uint64_t seed, Method method, const ClassifierConfig& config, std::size_t step,
                             int threads) {
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (class_sets.empty()) throw DataError("no classes");
    for (const auto& set : class_sets)
        if (static_cast<std::size_t>(set.cols()) <= train_per_class)
            throw DataError("a class has no samples left after taking " + std::to_string(train_per_class) +
                            " for training");
    config.validate();

    const std::size_t classes = class_sets.size();
    std::vector<char> wrong(static_cast<std::size_t>(repeats) * classes, 0);
    ClassifierConfig inner = config;
    inner.threads = 1;

    parallel_for(static_cast<std::size_t>(repeats), threads > 0 ? threads : default_thread_count(), [&](std::size_t rep) {
        Rng rng(mix_seed(seed, rep));
        std::vector<Matrix> train;
        std::vector<Matrix> test;
        for (const auto& set : class_sets) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(set.cols()));
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
            // Keep original order inside each part so resampling thins evenly.
            std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_per_class));
            std::sort(order.begin() + static_cast<std::ptrdiff_t>(train_per_class), order.end());
            Matrix tr(set.rows(), static_cast<Eigen::Index>(train_per_class));
            Matrix te(set.rows(), static_cast<Eigen::Index>(order.size() - train_per_class));
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i < train_per_class)
                    tr.col(static_cast<Eigen::Index>(i)) = set.col(order[i]);
                else
                    te.col(static_cast<Eigen::Index>(i - train_per_class)) = set.col(order[i]);
            }
            train.push_back(data::resample_columns(tr, step));
            test.push_back(data::resample_columns(te, step));
        }
        for (std::size_t c = 0; c < classes; ++c) {
            const auto ds = assemble(train, test[c]);
            wrong[rep * classes + c] = classify_dataset(ds, method, inner).decision != static_cast<ClassId>(c) ? 1 : 0;
        }
    });

    std::vector<int> per_repeat(static_cast<std::size_t>(repeats), 0);
    for (std::size_t rep = 0; rep < per_repeat.size(); ++rep)
        for (std::size_t c = 0; c < classes; ++c) per_repeat[rep] += wrong[rep * classes + c];
    return summarize(std::string(method_name(method)), 0, seed, per_repeat, static_cast<int>(classes));
}

// ---------------------------------------------------------------------------

void write_reports_csv(std::ostream& out, std::span<const TrialReport> reports) {
    out << "m,classifier,mean_error,std_error,trials,seed\n";
    for (const auto& r : reports)
        out << r.m << ',' << r.classifier << ',' << data::format_real(r.mean_error) << ','
            << data::format_real(r.std_error) << ',' << r.trials << ',' << r.seed << '\n';
}

std::string reports_json(std::span<const TrialReport> reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back({{"m", r.m},
                       {"classifier", r.classifier},
                       {"mean_error", r.mean_error},
                       {"std_error", r.std_error},
                       {"trials", r.trials},
                       {"seed", r.seed},
                       {"trial_errors", r.trial_errors}});
    }
    return arr.dump(2);
}

std::string session_json(const SessionResult& result) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < result.pair_errors.rows(); ++i) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < result.pair_errors.cols(); ++j) r.push_back(result.pair_errors(i, j));
        rows.push_back(std::move(r));
    }
    nlohmann::ordered_json j = {{"classifier", result.classifier},
                                {"r", result.step},
                                {"pair_errors", std::move(rows)},
                                {"mean_error", result.mean_error}};
    return j.dump(2);
}

}  // namespace msc::eval
