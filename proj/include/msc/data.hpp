#pragma once

#include "msc/common.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace msc::data {

struct LabeledSample {
    Vector features;
    ClassId label = 0;
};

/// Labeled gallery, virtual samples and one unlabeled observation set.
///
/// Graph-based classifiers see the nodes in the fixed order
/// labeled, virtual, observations; virtual samples count as labeled nodes.
class Dataset {
public:
    Dataset(std::vector<LabeledSample> labeled, std::vector<LabeledSample> virtual_samples,
            std::vector<Vector> observations, int classes);

    int classes() const { return classes_; }
    Eigen::Index dimension() const { return dimension_; }

    std::size_t labeled_count() const { return labeled_.size(); }
    std::size_t virtual_count() const { return virtual_.size(); }
    std::size_t observation_count() const { return observations_.size(); }
    /// l + n_vs: rows of the graph carrying a known label.
    std::size_t anchored_count() const { return labeled_.size() + virtual_.size(); }
    std::size_t size() const { return anchored_count() + observations_.size(); }

    const std::vector<LabeledSample>& labeled() const { return labeled_; }
    const std::vector<LabeledSample>& virtual_samples() const { return virtual_; }
    const std::vector<Vector>& observations() const { return observations_; }

    /// d x n matrix, columns ordered labeled, virtual, observations.
    Matrix sample_matrix() const;
    /// Labels of the first anchored_count() columns of sample_matrix().
    std::vector<ClassId> anchored_labels() const;
    /// d x m matrix of the observation set.
    Matrix observation_matrix() const;
    /// Per-class d x n_j matrices built from labeled and virtual samples.
    std::vector<Matrix> class_sets() const;

private:
    std::vector<LabeledSample> labeled_;
    std::vector<LabeledSample> virtual_;
    std::vector<Vector> observations_;
    int classes_;
    Eigen::Index dimension_;
};

// ---------------------------------------------------------------------------
// CSV format
//
//   #d=<d>,c=<c>
//   <class>,f1,...,fd          labeled row, class in 1..c
//   0,f1,...,fd                observation row
//   -1,<class>,f1,...,fd       virtual-sample row with its inherited class

enum class RowKind { labeled, virtual_sample, observation };

struct CsvRow {
    RowKind kind;
    ClassId label;  // 0-based; unused for observations
    Vector features;
    std::size_t line;
};

struct CsvContents {
    Eigen::Index dimension;
    int classes;
    std::vector<CsvRow> rows;
};

/// Parses the header and every row, checking widths and label ranges but
/// not the Dataset cardinality invariants.
CsvContents parse_csv(std::istream& in);

Dataset load_dataset(const std::filesystem::path& path);
Dataset read_dataset(std::istream& in);

/// Loads a labeled-only file (one sample set per class) such as a session
/// recording. Rows keep file order within each class.
std::vector<Matrix> load_class_sets(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Shortest decimal text that round-trips the double.
std::string format_real(double value);

// ---------------------------------------------------------------------------
// Raster patterns

/// h x w intensity grid, vectorized column-major.
class RasterPattern {
public:
    explicit RasterPattern(Matrix pixels);

    static RasterPattern from_vector(const Vector& v, Eigen::Index height, Eigen::Index width);

    Eigen::Index height() const { return pixels_.rows(); }
    Eigen::Index width() const { return pixels_.cols(); }
    const Matrix& pixels() const { return pixels_; }
    double at(Eigen::Index row, Eigen::Index col) const { return pixels_(row, col); }

    Vector vectorize() const;

private:
    Matrix pixels_;
};

/// Rotates counter-clockwise by `degrees` about the grid center using
/// inverse-mapped bilinear interpolation; the pattern is zero outside its
/// support. Multiples of 90 degrees are exact permutations.
RasterPattern rotate_pattern(const RasterPattern& pattern, double degrees);

struct AngleRange {
    double min_degrees;
    double max_degrees;
};

/// Maximum redraws for one angle that collides with an earlier one.
inline constexpr int kAngleRetryCap = 100;

/// m pairwise-distinct angles drawn i.i.d. uniform from the range.
std::vector<double> draw_distinct_angles(std::size_t m, AngleRange range, std::uint64_t seed);

/// m rotated, vectorized copies of the pattern at distinct random angles.
std::vector<Vector> generate_observation_set(const RasterPattern& pattern, std::size_t m,
                                             AngleRange range, std::uint64_t seed);

struct LabeledPattern {
    RasterPattern pattern;
    ClassId label;
};

/// One virtual sample per (pattern, angle), pattern-major order.
std::vector<LabeledSample> augment_virtual_samples(std::span<const LabeledPattern> labeled,
                                                   std::span<const double> angles);

/// `count` angles spaced evenly over [lo, hi], endpoints included.
std::vector<double> regular_angles(std::size_t count, double lo, double hi);

/// Keeps elements 0, r, 2r, ...; result size is ceil(n / r).
template <typename T>
std::vector<T> resample_set(std::span<const T> samples, std::size_t step) {
    if (step < 1) throw ConfigError("resample step r must be >= 1");
    std::vector<T> out;
    out.reserve((samples.size() + step - 1) / step);
    for (std::size_t i = 0; i < samples.size(); i += step) out.push_back(samples[i]);
    return out;
}

/// Column version for d x n sample matrices.
Matrix resample_columns(const Matrix& samples, std::size_t step);

}  // namespace msc::data
