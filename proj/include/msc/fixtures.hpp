#pragma once

#include "msc/common.hpp"
#include "msc/data.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace msc::fixtures {

// ---------------------------------------------------------------------------
// Rotated raster patterns: a labeled gallery with rotated virtual copies, and
// observation sets made of random rotations of one held-out pattern.

struct RasterFixtureConfig {
    int classes = 10;
    int instances_per_class = 12;
    Eigen::Index height = 16;
    Eigen::Index width = 16;
    int gallery_per_class = 2;
    int virtual_per_sample = 4;
    data::AngleRange range{-40.0, 40.0};
    double jitter = 0.7;       // std of the per-instance control-point jitter (pixels)
    double deformation = 1.5;  // std of an extra jitter redrawn for every observation (0: rotations only)
    std::uint64_t seed = 0;
};

/// Polyline through (row, col) control points, drawn with a Gaussian profile.
struct Stroke {
    std::vector<std::array<double, 2>> controls;
    double thickness = 1.0;
};

/// Pixel (r, c) = exp(-dist^2 / 2 thickness^2) to the nearest segment.
data::RasterPattern render_stroke(const Stroke& stroke, Eigen::Index height, Eigen::Index width);

/// Copy with every control point moved by N(0, sigma^2) in each coordinate.
Stroke jitter_stroke(const Stroke& stroke, double sigma, Rng& rng);

/// A random 4-point prototype per class; instances jitter it and draw the
/// thickness from U(0.7, 1.1).
std::vector<std::vector<Stroke>> stroke_instances(const RasterFixtureConfig& config);
std::vector<std::vector<data::RasterPattern>> stroke_patterns(const RasterFixtureConfig& config);

class RotationFixture {
public:
    /// The first `gallery_per_class` patterns of each class form the gallery,
    /// the rest the pool observation sets are drawn from. Virtual samples use
    /// `virtual_per_sample` angles spaced regularly over the range.
    RotationFixture(const std::vector<std::vector<data::RasterPattern>>& patterns, int gallery_per_class,
                    int virtual_per_sample, data::AngleRange range);

    static RotationFixture synthetic(const RasterFixtureConfig& config);

    int classes() const { return static_cast<int>(pool_.size()); }
    const std::vector<data::LabeledSample>& gallery() const { return gallery_; }
    const std::vector<data::LabeledSample>& virtual_samples() const { return virtual_; }

    /// Gallery plus m rotations of a random pool pattern of class `cls`. In a
    /// synthetic fixture with deformation > 0 each observation is also redrawn
    /// from a freshly jittered copy of the pattern's stroke.
    data::Dataset trial(ClassId cls, std::size_t m, std::uint64_t seed) const;

private:
    std::vector<data::LabeledSample> gallery_;
    std::vector<data::LabeledSample> virtual_;
    std::vector<std::vector<data::RasterPattern>> pool_;
    data::AngleRange range_;
    std::vector<std::vector<Stroke>> pool_strokes_;  // synthetic fixtures only
    double deformation_ = 0.0;
};

// ---------------------------------------------------------------------------
// Curved 1-D manifolds: class c traces a closed random-Fourier curve in
// R^ambient. The curves share most of one Fourier shape, so classes pass
// close to each other and differ mostly in local geometry. Training sets
// sample the whole curve; a test set samples one arc, like a short video
// clip of a longer recording.

struct ManifoldFixtureConfig {
    int classes = 3;
    Eigen::Index ambient = 20;
    int harmonics = 5;
    double offset_scale = 0.0;      // spread of the class centers
    double amplitude_spread = 1.3;  // curve amplitudes run geometrically from 1/spread to spread
    double shared_fraction = 0.9;   // weight of a Fourier shape common to all classes, in [0, 1)
    double noise = 0.08;
    int train_per_class = 60;
    int test_per_class = 12;
    double test_arc = 0.5;  // radians of curve parameter covered by a test set
    std::uint64_t seed = 0;  // fixes the curves
};

class CurveFamily {
public:
    explicit CurveFamily(const ManifoldFixtureConfig& config);

    int classes() const { return static_cast<int>(centers_.size()); }
    Vector point(ClassId cls, double t) const;

    /// n noisy samples at parameters drawn uniformly from [t0, t0 + span).
    Matrix sample(ClassId cls, int n, double t0, double span, double noise, Rng& rng) const;

private:
    std::vector<Vector> centers_;
    std::vector<std::vector<Vector>> cos_terms_;
    std::vector<std::vector<Vector>> sin_terms_;
};

struct ManifoldSplit {
    std::vector<Matrix> train;  // one set per class, whole curve
    std::vector<Matrix> test;   // one set per class, a random arc
};

ManifoldSplit manifold_trial(const CurveFamily& family, const ManifoldFixtureConfig& config, std::uint64_t seed);

/// Dataset with every training sample labeled and `observations` as the
/// unlabeled set.
data::Dataset labeled_with_observations(const std::vector<Matrix>& train_sets, const Matrix& observations);

// ---------------------------------------------------------------------------

/// Well-separated isotropic Gaussian blobs: `per_class` labeled samples per
/// class and m observations drawn from class `observed`.
data::Dataset gaussian_blobs(int classes, Eigen::Index dimension, int per_class, std::size_t m, ClassId observed,
                             double separation, std::uint64_t seed);

}  // namespace msc::fixtures
