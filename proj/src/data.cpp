#include "msc/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

namespace msc::data {

namespace {

void check_sample(const Vector& v, Eigen::Index dimension, const char* what) {
    if (v.size() != dimension)
        throw DimensionError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                             ", expected " + std::to_string(dimension));
    if (!v.allFinite()) throw DataError(std::string(what) + " has non-finite entries");
}

Eigen::Index infer_dimension(const std::vector<LabeledSample>& labeled) {
    if (labeled.empty()) throw DataError("l >= 1 required: dataset has no labeled samples");
    return labeled.front().features.size();
}

}  // namespace

Dataset::Dataset(std::vector<LabeledSample> labeled, std::vector<LabeledSample> virtual_samples,
                 std::vector<Vector> observations, int classes)
    : labeled_(std::move(labeled)),
      virtual_(std::move(virtual_samples)),
      observations_(std::move(observations)),
      classes_(classes),
      dimension_(infer_dimension(labeled_)) {
    if (classes_ < 1) throw LabelError("class count c must be >= 1");
    if (dimension_ < 1) throw DimensionError("sample dimension d must be >= 1");
    if (observations_.empty()) throw DataError("m >= 1 required: dataset has no observations");
    auto check_labeled = [&](const std::vector<LabeledSample>& set, const char* what) {
        for (const auto& s : set) {
            check_sample(s.features, dimension_, what);
            if (s.label < 0 || s.label >= classes_)
                throw LabelError(std::string(what) + " label " + std::to_string(s.label + 1) +
                                 " outside 1.." + std::to_string(classes_));
        }
    };
    check_labeled(labeled_, "labeled sample");
    check_labeled(virtual_, "virtual sample");
    for (const auto& o : observations_) check_sample(o, dimension_, "observation");
}

Matrix Dataset::sample_matrix() const {
    Matrix X(dimension_, static_cast<Eigen::Index>(size()));
    Eigen::Index col = 0;
    for (const auto& s : labeled_) X.col(col++) = s.features;
    for (const auto& s : virtual_) X.col(col++) = s.features;
    for (const auto& o : observations_) X.col(col++) = o;
    return X;
}

std::vector<ClassId> Dataset::anchored_labels() const {
    std::vector<ClassId> labels;
    labels.reserve(anchored_count());
    for (const auto& s : labeled_) labels.push_back(s.label);
    for (const auto& s : virtual_) labels.push_back(s.label);
    return labels;
}

Matrix Dataset::observation_matrix() const {
    Matrix X(dimension_, static_cast<Eigen::Index>(observations_.size()));
    for (Eigen::Index j = 0; j < X.cols(); ++j) X.col(j) = observations_[static_cast<std::size_t>(j)];
    return X;
}

std::vector<Matrix> Dataset::class_sets() const {
    std::vector<std::vector<const Vector*>> members(static_cast<std::size_t>(classes_));
    for (const auto& s : labeled_) members[static_cast<std::size_t>(s.label)].push_back(&s.features);
    for (const auto& s : virtual_) members[static_cast<std::size_t>(s.label)].push_back(&s.features);
    std::vector<Matrix> sets;
    sets.reserve(members.size());
    for (const auto& m : members) {
        Matrix X(dimension_, static_cast<Eigen::Index>(m.size()));
        for (std::size_t j = 0; j < m.size(); ++j) X.col(static_cast<Eigen::Index>(j)) = *m[j];
        sets.push_back(std::move(X));
    }
    return sets;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

long parse_int(std::string_view field, std::size_t line) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line, "expected an integer, got '" + std::string(field) + "'");
    return value;
}

double parse_real(std::string_view field, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line, "expected a real number, got '" + std::string(field) + "'");
    if (!std::isfinite(value)) throw ParseError(line, "non-finite feature value");
    return value;
}

struct Header {
    long dimension;
    long classes;
};

Header parse_header(std::string_view text, std::size_t line) {
    text = trim(text);
    if (text.empty() || text.front() != '#')
        throw ParseError(line, "missing header '#d=<d>,c=<c>'");
    text.remove_prefix(1);
    const auto fields = split_fields(text);
    long d = -1;
    long c = -1;
    for (auto f : fields) {
        const auto eq = f.find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "malformed header field");
        const auto key = trim(f.substr(0, eq));
        const long value = parse_int(trim(f.substr(eq + 1)), line);
        if (key == "d")
            d = value;
        else if (key == "c")
            c = value;
        else
            throw ParseError(line, "unknown header key '" + std::string(key) + "'");
    }
    if (d < 1) throw ParseError(line, "header needs d >= 1");
    if (c < 1) throw ParseError(line, "header needs c >= 1");
    return {d, c};
}

}  // namespace

CsvContents parse_csv(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    bool have_header = false;
    CsvContents out{0, 0, {}};

    while (std::getline(in, text)) {
        ++line_no;
        const auto line = trim(text);
        if (line.empty()) continue;
        if (!have_header) {
            const auto h = parse_header(line, line_no);
            out.dimension = h.dimension;
            out.classes = static_cast<int>(h.classes);
            have_header = true;
            continue;
        }
        const auto fields = split_fields(line);
        const long tag = parse_int(fields[0], line_no);
        std::size_t first_feature = 1;
        CsvRow row{RowKind::observation, 0, {}, line_no};
        auto check_class = [&](long id) {
            if (id < 1 || id > out.classes)
                throw LabelError("line " + std::to_string(line_no) + ": label " + std::to_string(id) +
                                 " outside 1.." + std::to_string(out.classes));
            return static_cast<ClassId>(id - 1);
        };
        if (tag > 0) {
            row.kind = RowKind::labeled;
            row.label = check_class(tag);
        } else if (tag == 0) {
            row.kind = RowKind::observation;
        } else if (tag == -1) {
            if (fields.size() < 2) throw ParseError(line_no, "virtual row needs an inherited class id");
            row.kind = RowKind::virtual_sample;
            row.label = check_class(parse_int(fields[1], line_no));
            first_feature = 2;
        } else {
            throw LabelError("line " + std::to_string(line_no) + ": row tag " + std::to_string(tag) +
                             " is not a class id, 0 or -1");
        }
        const auto width = static_cast<Eigen::Index>(fields.size() - first_feature);
        if (width != out.dimension)
            throw DimensionError("line " + std::to_string(line_no) + ": row has " + std::to_string(width) +
                                 " features, expected d=" + std::to_string(out.dimension));
        row.features.resize(width);
        for (Eigen::Index j = 0; j < width; ++j)
            row.features(j) = parse_real(fields[first_feature + static_cast<std::size_t>(j)], line_no);
        out.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(line_no + 1, "missing header '#d=<d>,c=<c>'");
    return out;
}

Dataset read_dataset(std::istream& in) {
    auto contents = parse_csv(in);
    std::vector<LabeledSample> labeled;
    std::vector<LabeledSample> virtual_samples;
    std::vector<Vector> observations;
    for (auto& row : contents.rows) {
        switch (row.kind) {
            case RowKind::labeled: labeled.push_back({std::move(row.features), row.label}); break;
            case RowKind::virtual_sample: virtual_samples.push_back({std::move(row.features), row.label}); break;
            case RowKind::observation: observations.push_back(std::move(row.features)); break;
        }
    }
    return Dataset(std::move(labeled), std::move(virtual_samples), std::move(observations), contents.classes);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_dataset(in);
}

std::vector<Matrix> load_class_sets(const std::filesystem::path& path) {
    auto in = open_input(path);
    const auto contents = parse_csv(in);
    std::vector<std::vector<const Vector*>> members(static_cast<std::size_t>(contents.classes));
    for (const auto& row : contents.rows) {
        if (row.kind != RowKind::labeled)
            throw LabelError("line " + std::to_string(row.line) + ": class-set files hold labeled rows only");
        members[static_cast<std::size_t>(row.label)].push_back(&row.features);
    }
    std::vector<Matrix> sets;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].empty())
            throw DataError(path.string() + ": class " + std::to_string(c + 1) + " has no samples");
        Matrix X(contents.dimension, static_cast<Eigen::Index>(members[c].size()));
        for (std::size_t j = 0; j < members[c].size(); ++j) X.col(static_cast<Eigen::Index>(j)) = *members[c][j];
        sets.push_back(std::move(X));
    }
    return sets;
}

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
    out << "#d=" << dataset.dimension() << ",c=" << dataset.classes() << '\n';
    auto features = [&](const Vector& v) {
        for (Eigen::Index j = 0; j < v.size(); ++j) out << ',' << format_real(v(j));
        out << '\n';
    };
    for (const auto& s : dataset.labeled()) {
        out << s.label + 1;
        features(s.features);
    }
    for (const auto& s : dataset.virtual_samples()) {
        out << "-1," << s.label + 1;
        features(s.features);
    }
    for (const auto& o : dataset.observations()) {
        out << '0';
        features(o);
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_dataset(out, dataset);
}

// ---------------------------------------------------------------------------
// Raster patterns

RasterPattern::RasterPattern(Matrix pixels) : pixels_(std::move(pixels)) {
    if (pixels_.rows() < 2 || pixels_.cols() < 2) throw DimensionError("raster pattern needs h, w >= 2");
    if (!pixels_.allFinite()) throw DataError("raster pattern has non-finite intensities");
}

RasterPattern RasterPattern::from_vector(const Vector& v, Eigen::Index height, Eigen::Index width) {
    if (v.size() != height * width)
        throw DimensionError("vector of length " + std::to_string(v.size()) + " is not " +
                             std::to_string(height) + "x" + std::to_string(width));
    return RasterPattern(Eigen::Map<const Matrix>(v.data(), height, width));
}

Vector RasterPattern::vectorize() const {
    return Eigen::Map<const Vector>(pixels_.data(), pixels_.size());
}

namespace {

/// cos/sin of an angle in degrees, exact at multiples of 90.
std::pair<double, double> exact_cos_sin(double degrees) {
    const double reduced = std::fmod(degrees, 360.0);
    const double quarter = reduced / 90.0;
    if (quarter == std::round(quarter)) {
        switch ((static_cast<int>(std::round(quarter)) % 4 + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double rad = reduced * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

}  // namespace

RasterPattern rotate_pattern(const RasterPattern& pattern, double degrees) {
    if (!std::isfinite(degrees) || std::abs(degrees) > 180.0)
        throw ConfigError("rotation angle must satisfy |theta| <= 180");
    const auto [cos_t, sin_t] = exact_cos_sin(degrees);
    const Eigen::Index h = pattern.height();
    const Eigen::Index w = pattern.width();
    const double center_row = 0.5 * static_cast<double>(h - 1);
    const double center_col = 0.5 * static_cast<double>(w - 1);
    const Matrix& src = pattern.pixels();

    auto sample = [&](Eigen::Index r, Eigen::Index c) {
        return (r >= 0 && r < h && c >= 0 && c < w) ? src(r, c) : 0.0;
    };

    Matrix out(h, w);
    for (Eigen::Index c = 0; c < w; ++c) {
        for (Eigen::Index r = 0; r < h; ++r) {
            // y axis points up so positive angles turn counter-clockwise on screen.
            const double dx = static_cast<double>(c) - center_col;
            const double dy = center_row - static_cast<double>(r);
            const double sx = cos_t * dx + sin_t * dy;
            const double sy = -sin_t * dx + cos_t * dy;
            const double col = center_col + sx;
            const double row = center_row - sy;
            const double r0f = std::floor(row);
            const double c0f = std::floor(col);
            const double fr = row - r0f;
            const double fc = col - c0f;
            const auto r0 = static_cast<Eigen::Index>(r0f);
            const auto c0 = static_cast<Eigen::Index>(c0f);
            out(r, c) = (1.0 - fr) * (1.0 - fc) * sample(r0, c0) + (1.0 - fr) * fc * sample(r0, c0 + 1) +
                        fr * (1.0 - fc) * sample(r0 + 1, c0) + fr * fc * sample(r0 + 1, c0 + 1);
        }
    }
    return RasterPattern(std::move(out));
}

std::vector<double> draw_distinct_angles(std::size_t m, AngleRange range, std::uint64_t seed) {
    if (!(range.min_degrees <= range.max_degrees)) throw ConfigError("angle range needs min <= max");
    Rng rng(seed);
    std::vector<double> angles;
    angles.reserve(m);
    std::set<double> seen;
    for (std::size_t i = 0; i < m; ++i) {
        double a = rng.uniform(range.min_degrees, range.max_degrees);
        int retries = 0;
        while (seen.contains(a)) {
            if (++retries > kAngleRetryCap)
                throw ConfigError("cannot draw " + std::to_string(m) + " distinct angles in the range");
            a = rng.uniform(range.min_degrees, range.max_degrees);
        }
        seen.insert(a);
        angles.push_back(a);
    }
    return angles;
}

std::vector<Vector> generate_observation_set(const RasterPattern& pattern, std::size_t m, AngleRange range,
                                             std::uint64_t seed) {
    if (m < 1) throw ConfigError("observation count m must be >= 1");
    std::vector<Vector> out;
    out.reserve(m);
    for (double a : draw_distinct_angles(m, range, seed)) out.push_back(rotate_pattern(pattern, a).vectorize());
    return out;
}

std::vector<LabeledSample> augment_virtual_samples(std::span<const LabeledPattern> labeled,
                                                   std::span<const double> angles) {
    if (angles.empty()) throw ConfigError("virtual-sample angle list must be nonempty");
    std::vector<LabeledSample> out;
    out.reserve(labeled.size() * angles.size());
    for (const auto& lp : labeled)
        for (double a : angles) out.push_back({rotate_pattern(lp.pattern, a).vectorize(), lp.label});
    return out;
}

std::vector<double> regular_angles(std::size_t count, double lo, double hi) {
    if (count == 0) return {};
    if (count == 1) return {0.5 * (lo + hi)};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

Matrix resample_columns(const Matrix& samples, std::size_t step) {
    if (step < 1) throw ConfigError("resample step r must be >= 1");
    const auto n = static_cast<std::size_t>(samples.cols());
    const auto kept = (n + step - 1) / step;
    Matrix out(samples.rows(), static_cast<Eigen::Index>(kept));
    for (std::size_t i = 0; i < kept; ++i)
        out.col(static_cast<Eigen::Index>(i)) = samples.col(static_cast<Eigen::Index>(i * step));
    return out;
}

}  // namespace msc::data
