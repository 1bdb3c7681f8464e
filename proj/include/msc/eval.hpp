#pragma once

#include "msc/classifier.hpp"
#include "msc/common.hpp"
#include "msc/data.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msc::eval {

/// Fraction of (predicted, true) pairs that disagree.
double error_rate(std::span<const std::pair<ClassId, ClassId>> decisions);

/// Mean of e(i, j) over all ordered session pairs i != j; the diagonal is ignored.
double session_metric(const Matrix& pair_errors);

struct TrialReport {
    std::size_t m = 0;
    std::string classifier;
    double mean_error = 0.0;
    double std_error = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> trial_errors;  // per trial, in trial order
};

/// Mean and sample standard deviation of per-trial errors; the mean is
/// formed from integer counts so it does not depend on summation order.
TrialReport summarize(std::string classifier, std::size_t m, std::uint64_t seed,
                      std::span<const int> wrong_per_trial, int decisions_per_trial);

/// Builds the dataset for one (class, m) realization from a seed.
using DatasetFactory = std::function<data::Dataset(ClassId cls, std::size_t m, std::uint64_t seed)>;

struct SweepSpec {
    int classes = 0;
    DatasetFactory factory;
    std::vector<std::size_t> m_values;
    int trials = 20;
    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::masc};
    ClassifierConfig config;
    int threads = 0;
};

/// Seed of realization (m, trial, class); independent of the schedule.
std::uint64_t trial_seed(std::uint64_t master, std::size_t m, int trial, ClassId cls);

/// For each m and trial, one observation set per class is generated and
/// classified by every method on the same dataset. Reports are ordered by
/// m, then method.
std::vector<TrialReport> observation_sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Session-pair protocol: sessions[s][c] is class c's sample set in session s.

using Session = std::vector<Matrix>;

struct SessionResult {
    std::string classifier;
    std::size_t step = 1;
    Matrix pair_errors;  // e(i, j): train on session i, test on session j
    double mean_error = 0.0;
};

SessionResult run_sessions(std::span<const Session> sessions, Method method, const ClassifierConfig& config,
                           std::size_t step, int threads = 0);

/// Repeated random train/test split of each class set (the multi-view
/// protocol): `train_per_class` columns train, the rest form the test set.
TrialReport run_random_split(std::span<const Matrix> class_sets, std::size_t train_per_class, int repeats,
                             std::uint64_t seed, Method method, const ClassifierConfig& config, std::size_t step = 1,
                             int threads = 0);

// ---------------------------------------------------------------------------
// Serialization

/// Header `m,classifier,mean_error,std_error,trials,seed` then one row per report.
void write_reports_csv(std::ostream& out, std::span<const TrialReport> reports);
std::string reports_json(std::span<const TrialReport> reports);
std::string session_json(const SessionResult& result);

}  // namespace msc::eval
