#pragma once

#include "msc/classifier.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace msc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

/// Everything a subcommand can be configured with. The JSON config file uses
/// the same field names; unknown names are rejected.
struct ExperimentConfig {
    std::vector<std::string> classifier{"masc"};
    int k = 5;
    std::string sigma = "median";  // "median" or a positive number
    std::size_t sigma_cap = 1000;
    double mu = 1.0;
    int q = 9;
    std::string sigma_kernel = "median";
    int similarity_top = 1;
    double energy_cutoff = 0.96;
    std::string divergence = "symmetric";  // symmetric | test-to-class | class-to-test
    std::size_t r = 1;
    std::vector<std::size_t> m_values{10, 30, 50, 70, 90, 110, 130, 150};
    std::size_t m = 30;
    int trials = 100;
    std::uint64_t seed = 0;
    double theta_min = -40.0;
    double theta_max = 40.0;
    std::vector<std::string> input;
    std::string output;

    // Fixture and protocol knobs.
    std::string fixture = "raster";  // raster | manifold | blobs
    int classes = 0;                 // 0: the fixture's own default
    int observed_class = 1;
    int gallery = 2;                 // labeled patterns (or blob samples) per class
    int virtual_per_sample = 4;
    double deformation = 1.5;        // raster: per-observation stroke jitter
    int height = 16;
    int width = 16;
    int dimension = 2;               // blobs
    double separation = 6.0;         // blobs
    std::size_t split_train = 0;     // sessions: > 0 switches to repeated random splits
};

/// Reads a JSON object into `config`, overriding only the fields present.
/// Throws ConfigError on unknown fields or wrong types.
void apply_json(ExperimentConfig& config, const std::string& json_text);

/// Library-level classifier settings derived from the experiment config.
ClassifierConfig classifier_config(const ExperimentConfig& config);

/// Runs one subcommand; args[0] is the program name. Primary output goes to
/// `out` (or the --output file), diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msc::cli
