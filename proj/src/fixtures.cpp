#include "msc/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace msc::fixtures {

namespace {

using Point2 = std::array<double, 2>;

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const double vr = b[0] - a[0];
    const double vc = b[1] - a[1];
    const double len2 = vr * vr + vc * vc;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * vr + (p[1] - a[1]) * vc) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dr = p[0] - (a[0] + t * vr);
    const double dc = p[1] - (a[1] + t * vc);
    return std::sqrt(dr * dr + dc * dc);
}

}  // namespace

data::RasterPattern render_stroke(const Stroke& stroke, Eigen::Index height, Eigen::Index width) {
    if (stroke.controls.empty() || !(stroke.thickness > 0.0)) throw ConfigError("stroke needs points and thickness > 0");
    Matrix pixels(height, width);
    const double scale = 1.0 / (2.0 * stroke.thickness * stroke.thickness);
    const auto& pts = stroke.controls;
    for (Eigen::Index c = 0; c < width; ++c)
        for (Eigen::Index r = 0; r < height; ++r) {
            const Point2 p{static_cast<double>(r), static_cast<double>(c)};
            double best = segment_distance(p, pts[0], pts[0]);
            for (std::size_t s = 0; s + 1 < pts.size(); ++s) best = std::min(best, segment_distance(p, pts[s], pts[s + 1]));
            pixels(r, c) = std::exp(-best * best * scale);
        }
    return data::RasterPattern(std::move(pixels));
}

Stroke jitter_stroke(const Stroke& stroke, double sigma, Rng& rng) {
    Stroke out = stroke;
    for (auto& p : out.controls) {
        p[0] += sigma * rng.normal();
        p[1] += sigma * rng.normal();
    }
    return out;
}

std::vector<std::vector<Stroke>> stroke_instances(const RasterFixtureConfig& config) {
    if (config.classes < 1 || config.instances_per_class < 1) throw ConfigError("raster fixture needs classes and instances");
    constexpr int kControlPoints = 4;
    constexpr double kMargin = 3.0;
    Rng rng(config.seed);
    const double row_span = static_cast<double>(config.height - 1) - 2 * kMargin;
    const double col_span = static_cast<double>(config.width - 1) - 2 * kMargin;

    std::vector<std::vector<Stroke>> classes(static_cast<std::size_t>(config.classes));
    for (auto& instances : classes) {
        Stroke prototype;
        for (int i = 0; i < kControlPoints; ++i)
            prototype.controls.push_back({kMargin + row_span * rng.uniform(), kMargin + col_span * rng.uniform()});
        for (int i = 0; i < config.instances_per_class; ++i) {
            Stroke s = jitter_stroke(prototype, config.jitter, rng);
            s.thickness = rng.uniform(0.7, 1.1);
            instances.push_back(std::move(s));
        }
    }
    return classes;
}

std::vector<std::vector<data::RasterPattern>> stroke_patterns(const RasterFixtureConfig& config) {
    std::vector<std::vector<data::RasterPattern>> out;
    for (const auto& instances : stroke_instances(config)) {
        std::vector<data::RasterPattern> rendered;
        for (const auto& s : instances) rendered.push_back(render_stroke(s, config.height, config.width));
        out.push_back(std::move(rendered));
    }
    return out;
}

RotationFixture::RotationFixture(const std::vector<std::vector<data::RasterPattern>>& patterns,
                                 int gallery_per_class, int virtual_per_sample, data::AngleRange range)
    : range_(range) {
    if (patterns.empty()) throw DataError("rotation fixture needs at least one class");
    if (gallery_per_class < 1) throw ConfigError("gallery needs at least one pattern per class");
    const auto angles = data::regular_angles(static_cast<std::size_t>(std::max(virtual_per_sample, 0)),
                                             range.min_degrees, range.max_degrees);
    std::vector<data::LabeledPattern> labeled;
    for (std::size_t c = 0; c < patterns.size(); ++c) {
        const auto& set = patterns[c];
        if (set.size() <= static_cast<std::size_t>(gallery_per_class))
            throw DataError("class " + std::to_string(c + 1) + " has no patterns left for observation sets");
        for (int i = 0; i < gallery_per_class; ++i) {
            const auto& p = set[static_cast<std::size_t>(i)];
            gallery_.push_back({p.vectorize(), static_cast<ClassId>(c)});
            labeled.push_back({p, static_cast<ClassId>(c)});
        }
        pool_.emplace_back(set.begin() + gallery_per_class, set.end());
    }
    if (!angles.empty()) virtual_ = data::augment_virtual_samples(labeled, angles);
}

RotationFixture RotationFixture::synthetic(const RasterFixtureConfig& config) {
    if (!(config.deformation >= 0.0)) throw ConfigError("deformation must be >= 0");
    auto strokes = stroke_instances(config);
    std::vector<std::vector<data::RasterPattern>> patterns;
    for (const auto& instances : strokes) {
        std::vector<data::RasterPattern> rendered;
        for (const auto& s : instances) rendered.push_back(render_stroke(s, config.height, config.width));
        patterns.push_back(std::move(rendered));
    }
    RotationFixture fixture(patterns, config.gallery_per_class, config.virtual_per_sample, config.range);
    for (auto& instances : strokes) instances.erase(instances.begin(), instances.begin() + config.gallery_per_class);
    fixture.pool_strokes_ = std::move(strokes);
    fixture.deformation_ = config.deformation;
    return fixture;
}

data::Dataset RotationFixture::trial(ClassId cls, std::size_t m, std::uint64_t seed) const {
    if (cls < 0 || cls >= classes()) throw ConfigError("class outside fixture");
    const auto& pool = pool_[static_cast<std::size_t>(cls)];
    Rng rng(seed);
    const std::size_t pick = static_cast<std::size_t>(rng.below(pool.size()));
    const auto& source = pool[pick];
    std::vector<Vector> observations;
    if (deformation_ > 0.0 && !pool_strokes_.empty()) {
        const auto& stroke = pool_strokes_[static_cast<std::size_t>(cls)][pick];
        for (double angle : data::draw_distinct_angles(m, range_, rng.next_u64())) {
            const auto drawn = render_stroke(jitter_stroke(stroke, deformation_, rng), source.height(), source.width());
            observations.push_back(data::rotate_pattern(drawn, angle).vectorize());
        }
    } else {
        observations = data::generate_observation_set(source, m, range_, rng.next_u64());
    }
    return data::Dataset(gallery_, virtual_, std::move(observations), classes());
}

// ---------------------------------------------------------------------------

CurveFamily::CurveFamily(const ManifoldFixtureConfig& config) {
    if (config.classes < 1 || config.ambient < 2 || config.harmonics < 1)
        throw ConfigError("manifold fixture needs classes >= 1, ambient >= 2, harmonics >= 1");
    Rng rng(config.seed);
    const double unit = 1.0 / std::sqrt(static_cast<double>(config.ambient));
    auto gaussian_vector = [&](double scale) {
        Vector v(config.ambient);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = scale * unit * rng.normal();
        return v;
    };
    if (!(config.amplitude_spread >= 1.0)) throw ConfigError("amplitude spread must be >= 1");
    if (!(config.shared_fraction >= 0.0 && config.shared_fraction < 1.0))
        throw ConfigError("shared fraction must lie in [0, 1)");
    std::vector<Vector> shared_cos;
    std::vector<Vector> shared_sin;
    for (int h = 1; h <= config.harmonics; ++h) {
        shared_cos.push_back(gaussian_vector(1.0 / h));
        shared_sin.push_back(gaussian_vector(1.0 / h));
    }
    const double shared = std::sqrt(config.shared_fraction);
    const double own = std::sqrt(1.0 - config.shared_fraction);
    for (int c = 0; c < config.classes; ++c) {
        const double position = config.classes > 1 ? 2.0 * c / (config.classes - 1) - 1.0 : 0.0;
        const double amplitude = std::pow(config.amplitude_spread, position);
        centers_.push_back(gaussian_vector(config.offset_scale));
        std::vector<Vector> cos_terms;
        std::vector<Vector> sin_terms;
        for (int h = 1; h <= config.harmonics; ++h) {
            const auto k = static_cast<std::size_t>(h - 1);
            cos_terms.push_back(amplitude * (shared * shared_cos[k] + own * gaussian_vector(1.0 / h)));
            sin_terms.push_back(amplitude * (shared * shared_sin[k] + own * gaussian_vector(1.0 / h)));
        }
        cos_terms_.push_back(std::move(cos_terms));
        sin_terms_.push_back(std::move(sin_terms));
    }
}

Vector CurveFamily::point(ClassId cls, double t) const {
    const auto c = static_cast<std::size_t>(cls);
    Vector x = centers_[c];
    for (std::size_t h = 0; h < cos_terms_[c].size(); ++h) {
        const double arg = static_cast<double>(h + 1) * t;
        x += std::cos(arg) * cos_terms_[c][h] + std::sin(arg) * sin_terms_[c][h];
    }
    return x;
}

Matrix CurveFamily::sample(ClassId cls, int n, double t0, double span, double noise, Rng& rng) const {
    Matrix X(centers_.front().size(), n);
    for (int j = 0; j < n; ++j) {
        Vector x = point(cls, t0 + span * rng.uniform());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += noise * rng.normal();
        X.col(j) = x;
    }
    return X;
}

ManifoldSplit manifold_trial(const CurveFamily& family, const ManifoldFixtureConfig& config, std::uint64_t seed) {
    Rng rng(seed);
    ManifoldSplit split;
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    for (int c = 0; c < family.classes(); ++c) {
        split.train.push_back(family.sample(c, config.train_per_class, 0.0, kTwoPi, config.noise, rng));
        const double t0 = kTwoPi * rng.uniform();
        split.test.push_back(family.sample(c, config.test_per_class, t0, config.test_arc, config.noise, rng));
    }
    return split;
}

data::Dataset labeled_with_observations(const std::vector<Matrix>& train_sets, const Matrix& observations) {
    std::vector<data::LabeledSample> labeled;
    for (std::size_t c = 0; c < train_sets.size(); ++c)
        for (Eigen::Index j = 0; j < train_sets[c].cols(); ++j)
            labeled.push_back({train_sets[c].col(j), static_cast<ClassId>(c)});
    std::vector<Vector> obs;
    obs.reserve(static_cast<std::size_t>(observations.cols()));
    for (Eigen::Index j = 0; j < observations.cols(); ++j) obs.emplace_back(observations.col(j));
    return data::Dataset(std::move(labeled), {}, std::move(obs), static_cast<int>(train_sets.size()));
}

data::Dataset gaussian_blobs(int classes, Eigen::Index dimension, int per_class, std::size_t m, ClassId observed,
                             double separation, std::uint64_t seed) {
    if (classes < 1 || dimension < 1 || per_class < 1 || m < 1) throw ConfigError("blob fixture needs positive sizes");
    if (observed < 0 || observed >= classes) throw ConfigError("observed class outside 1..c");
    Rng rng(seed);
    auto draw = [&](ClassId c) {
        Vector x(dimension);
        for (Eigen::Index i = 0; i < dimension; ++i) x(i) = rng.normal();
        x(c % dimension) += separation * static_cast<double>(1 + c / dimension);
        return x;
    };
    std::vector<data::LabeledSample> labeled;
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i) labeled.push_back({draw(c), c});
    std::vector<Vector> obs;
    for (std::size_t i = 0; i < m; ++i) obs.push_back(draw(observed));
    return data::Dataset(std::move(labeled), {}, std::move(obs), classes);
}

}  // namespace msc::fixtures
