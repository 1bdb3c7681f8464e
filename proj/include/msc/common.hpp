#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace msc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Class indices are 0-based inside the library. File formats and CLI
/// output use 1-based ids; conversion happens at the I/O boundary only.
using ClassId = int;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters (k < 1, sigma <= 0, q larger than the data allows, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DimensionError : public DataError {
public:
    using DataError::DataError;
};

class LabelError : public DataError {
public:
    using DataError::DataError;
};

/// Outcome of a set-to-set classifier: one score per class and the pick.
struct SetDecision {
    ClassId decision = 0;
    Vector scores;
    bool tie = false;
};

/// Relative band within which two scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Smallest index among the scores within kTieTolerance of the best one.
SetDecision pick_min(Vector scores);
SetDecision pick_max(Vector scores);

/// Factorization or solve failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Portable random source (SplitMix64 stream). The std distributions are
/// implementation-defined, so all draws are derived from raw bits here to
/// keep fixtures identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer, used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Worker count for parallel loops: the MSC_THREADS environment variable,
/// with 0 or unset meaning hardware concurrency.
int default_thread_count();

}  // namespace msc
