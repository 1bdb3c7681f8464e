#include "msc/cli.hpp"

#include "msc/eval.hpp"
#include "msc/fixtures.hpp"
#include "msc/graph.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace msc::cli {

using json = nlohmann::ordered_json;

namespace {

template <class T>
T json_value(const nlohmann::json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

std::vector<std::string> string_or_list(const nlohmann::json& value, const std::string& key) {
    if (value.is_string()) return {value.get<std::string>()};
    return json_value<std::vector<std::string>>(value, key);
}

// "median" or a number, both accepted in JSON.
std::string sigma_text(const nlohmann::json& value, const std::string& key) {
    if (value.is_number()) return data::format_real(value.get<double>());
    return json_value<std::string>(value, key);
}

double parse_positive(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v))
        throw ConfigError(what + " must be 'median' or a positive number (got '" + text + "')");
    return v;
}

graph::SigmaPolicy sigma_policy(const ExperimentConfig& cfg) {
    if (cfg.sigma == "median") return graph::MedianSigma{cfg.sigma_cap, cfg.seed};
    return graph::FixedSigma{parse_positive(cfg.sigma, "sigma")};
}

stat::Divergence parse_divergence(const std::string& name) {
    if (name == "symmetric") return stat::Divergence::symmetric;
    if (name == "test-to-class") return stat::Divergence::test_to_class;
    if (name == "class-to-test") return stat::Divergence::class_to_test;
    throw ConfigError("unknown divergence '" + name + "' (expected symmetric|test-to-class|class-to-test)");
}

std::vector<Method> methods_of(const ExperimentConfig& cfg) {
    if (cfg.classifier.empty()) throw ConfigError("no classifier given");
    std::vector<Method> out;
    for (const auto& name : cfg.classifier) out.push_back(parse_method(name));
    return out;
}

Method single_method(const ExperimentConfig& cfg) {
    const auto methods = methods_of(cfg);
    if (methods.size() != 1) throw ConfigError("this subcommand takes exactly one classifier");
    return methods.front();
}

const std::string& single_input(const ExperimentConfig& cfg) {
    if (cfg.input.size() != 1) throw ConfigError("exactly one --input file required");
    return cfg.input.front();
}

data::AngleRange angle_range(const ExperimentConfig& cfg) {
    if (!(cfg.theta_min < cfg.theta_max)) throw ConfigError("theta-min must be < theta-max");
    return {cfg.theta_min, cfg.theta_max};
}

ClassId observed_class(const ExperimentConfig& cfg, int classes) {
    if (cfg.observed_class < 1 || cfg.observed_class > classes)
        throw ConfigError("observed class must lie in 1.." + std::to_string(classes));
    return cfg.observed_class - 1;
}

fixtures::RasterFixtureConfig raster_config(const ExperimentConfig& cfg) {
    fixtures::RasterFixtureConfig rc;
    if (cfg.classes > 0) rc.classes = cfg.classes;
    rc.gallery_per_class = cfg.gallery;
    rc.instances_per_class = cfg.gallery + 10;
    rc.virtual_per_sample = cfg.virtual_per_sample;
    rc.height = cfg.height;
    rc.width = cfg.width;
    rc.range = angle_range(cfg);
    rc.deformation = cfg.deformation;
    rc.seed = cfg.seed;
    return rc;
}

fixtures::ManifoldFixtureConfig manifold_config(const ExperimentConfig& cfg) {
    fixtures::ManifoldFixtureConfig mc;
    if (cfg.classes > 0) mc.classes = cfg.classes;
    mc.seed = cfg.seed;
    return mc;
}

// Labeled rows of a dataset file, one raster pattern list per class.
std::vector<std::vector<data::RasterPattern>> load_patterns(const ExperimentConfig& cfg) {
    const auto sets = data::load_class_sets(single_input(cfg));
    std::vector<std::vector<data::RasterPattern>> patterns;
    for (const auto& set : sets) {
        if (set.rows() != static_cast<Eigen::Index>(cfg.height) * cfg.width)
            throw DimensionError("pattern file has d=" + std::to_string(set.rows()) + " but height*width=" +
                                 std::to_string(cfg.height * cfg.width));
        std::vector<data::RasterPattern> list;
        for (Eigen::Index j = 0; j < set.cols(); ++j)
            list.push_back(data::RasterPattern::from_vector(set.col(j), cfg.height, cfg.width));
        patterns.push_back(std::move(list));
    }
    return patterns;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns its primary output as a string.

std::string cmd_classify(const ExperimentConfig& cfg, std::ostream& err) {
    const Method method = single_method(cfg);
    const auto dataset = data::load_dataset(single_input(cfg));
    const auto result = classify_dataset(dataset, method, classifier_config(cfg));
    std::vector<double> scores(result.scores.data(), result.scores.data() + result.scores.size());
    json j = {{"classifier", method_name(method)},
              {"decision", result.decision + 1},
              {"scores", scores},
              {"tie", result.tie},
              {"n", dataset.size()},
              {"l", dataset.anchored_count()},
              {"m", dataset.observation_count()},
              {"c", dataset.classes()},
              {"seed", cfg.seed}};
    err << method_name(method) << ": class " << result.decision + 1 << " of " << dataset.classes()
        << (result.tie ? " (tie)" : "") << '\n';
    return j.dump() + "\n";
}

std::string cmd_sweep(const ExperimentConfig& cfg, std::ostream& err) {
    eval::SweepSpec spec;
    spec.m_values = cfg.m_values;
    spec.trials = cfg.trials;
    spec.seed = cfg.seed;
    spec.methods = methods_of(cfg);
    spec.config = classifier_config(cfg);

    if (cfg.fixture == "raster") {
        auto fixture = std::make_shared<fixtures::RotationFixture>(
            cfg.input.empty() ? fixtures::RotationFixture::synthetic(raster_config(cfg))
                              : fixtures::RotationFixture(load_patterns(cfg), cfg.gallery, cfg.virtual_per_sample,
                                                          angle_range(cfg)));
        spec.classes = fixture->classes();
        spec.factory = [fixture](ClassId cls, std::size_t m, std::uint64_t seed) { return fixture->trial(cls, m, seed); };
    } else if (cfg.fixture == "manifold") {
        if (!cfg.input.empty()) throw ConfigError("the manifold fixture takes no --input");
        auto mc = manifold_config(cfg);
        auto family = std::make_shared<fixtures::CurveFamily>(mc);
        spec.classes = family->classes();
        spec.factory = [family, mc](ClassId cls, std::size_t m, std::uint64_t seed) mutable {
            auto local = mc;
            local.test_per_class = static_cast<int>(m);
            auto split = fixtures::manifold_trial(*family, local, seed);
            return fixtures::labeled_with_observations(split.train, split.test[static_cast<std::size_t>(cls)]);
        };
    } else {
        throw ConfigError("sweep fixture must be raster or manifold (got '" + cfg.fixture + "')");
    }

    const auto reports = eval::observation_sweep(spec);
    for (const auto& r : reports)
        err << "m=" << r.m << ' ' << r.classifier << ": " << data::format_real(r.mean_error) << " ("
            << data::format_real(r.std_error) << ")\n";
    std::ostringstream csv;
    eval::write_reports_csv(csv, reports);
    return csv.str();
}

std::string cmd_sessions(const ExperimentConfig& cfg, std::ostream& err) {
    const Method method = single_method(cfg);
    const auto config = classifier_config(cfg);
    if (cfg.split_train > 0) {
        const auto sets = data::load_class_sets(single_input(cfg));
        const auto report = eval::run_random_split(sets, cfg.split_train, cfg.trials, cfg.seed, method, config, cfg.r);
        err << method_name(method) << ": error " << data::format_real(report.mean_error) << " ("
            << data::format_real(report.std_error) << ") over " << report.trials << " splits\n";
        json j = {{"classifier", report.classifier},
                  {"r", cfg.r},
                  {"train_per_class", cfg.split_train},
                  {"mean_error", report.mean_error},
                  {"std_error", report.std_error},
                  {"trials", report.trials},
                  {"seed", report.seed},
                  {"trial_errors", report.trial_errors}};
        return j.dump(2) + "\n";
    }
    if (cfg.input.size() < 2) throw ConfigError("sessions needs >= 2 --input session files (or --split-train)");
    std::vector<eval::Session> sessions;
    for (const auto& path : cfg.input) sessions.push_back(data::load_class_sets(path));
    const auto result = eval::run_sessions(sessions, method, config, cfg.r);
    err << method_name(method) << ": mean pairwise error " << data::format_real(result.mean_error) << '\n';
    return eval::session_json(result) + "\n";
}

std::string cmd_synth(const ExperimentConfig& cfg, std::ostream& err) {
    std::ostringstream out;
    if (cfg.fixture == "raster") {
        const auto rc = raster_config(cfg);
        const auto fixture = fixtures::RotationFixture::synthetic(rc);
        const auto ds = fixture.trial(observed_class(cfg, rc.classes), cfg.m, mix_seed(cfg.seed, 1));
        data::write_dataset(out, ds);
    } else if (cfg.fixture == "manifold") {
        auto mc = manifold_config(cfg);
        mc.test_per_class = static_cast<int>(cfg.m);
        const fixtures::CurveFamily family(mc);
        const auto split = fixtures::manifold_trial(family, mc, mix_seed(cfg.seed, 1));
        const ClassId cls = observed_class(cfg, mc.classes);
        data::write_dataset(out, fixtures::labeled_with_observations(split.train, split.test[static_cast<std::size_t>(cls)]));
    } else if (cfg.fixture == "blobs") {
        const int classes = cfg.classes > 0 ? cfg.classes : 3;
        const auto ds = fixtures::gaussian_blobs(classes, cfg.dimension, cfg.gallery, cfg.m, observed_class(cfg, classes),
                                                 cfg.separation, cfg.seed);
        data::write_dataset(out, ds);
    } else {
        throw ConfigError("synth fixture must be raster, manifold or blobs (got '" + cfg.fixture + "')");
    }
    err << "synth " << cfg.fixture << ": observed class " << cfg.observed_class << ", m=" << cfg.m << '\n';
    return out.str();
}

std::string cmd_graph(const ExperimentConfig& cfg, std::ostream& err) {
    const auto dataset = data::load_dataset(single_input(cfg));
    const auto g = graph::build_knn_graph(dataset.sample_matrix(), {cfg.k, sigma_policy(cfg), 0});
    err << "n=" << g.n << " edges=" << g.edge_count() << " sigma=" << data::format_real(g.sigma) << '\n';
    std::ostringstream out;
    graph::write_edge_list(out, g);
    return out.str();
}

// ---------------------------------------------------------------------------
// Flag registration: every flag parses into a scratch config and is copied
// over the file/default config only when given on the command line.

struct Binding {
    CLI::Option* option;
    std::function<void(ExperimentConfig&, const ExperimentConfig&)> copy;
};

class FlagSet {
public:
    FlagSet(CLI::App* app, ExperimentConfig& scratch, std::vector<Binding>& bindings)
        : app_(app), scratch_(scratch), bindings_(bindings) {}

    template <class T>
    FlagSet& add(const std::string& name, T ExperimentConfig::*field, const std::string& help) {
        CLI::Option* opt = app_->add_option(name, scratch_.*field, help);
        if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) opt->delimiter(',');
        bindings_.push_back({opt, [field](ExperimentConfig& dst, const ExperimentConfig& src) { dst.*field = src.*field; }});
        return *this;
    }

private:
    CLI::App* app_;
    ExperimentConfig& scratch_;
    std::vector<Binding>& bindings_;
};

void classifier_flags(FlagSet& f) {
    f.add("--classifier", &ExperimentConfig::classifier, "masc|lp|msm|kmsm|kld (comma list for sweep)")
        .add("--k", &ExperimentConfig::k, "nearest neighbors per node")
        .add("--sigma", &ExperimentConfig::sigma, "Gaussian edge width, 'median' or a number")
        .add("--sigma-cap", &ExperimentConfig::sigma_cap, "sample cap of the median heuristic")
        .add("--mu", &ExperimentConfig::mu, "label propagation fitting weight")
        .add("--q", &ExperimentConfig::q, "subspace dimension for MSM/KMSM")
        .add("--sigma-kernel", &ExperimentConfig::sigma_kernel, "KMSM kernel width, 'median' or a number")
        .add("--similarity-top", &ExperimentConfig::similarity_top, "average cos^2 of the top-t angles")
        .add("--energy-cutoff", &ExperimentConfig::energy_cutoff, "KLD retained covariance energy")
        .add("--divergence", &ExperimentConfig::divergence, "symmetric|test-to-class|class-to-test");
}

void common_flags(FlagSet& f) {
    f.add("--seed", &ExperimentConfig::seed, "RNG seed").add("--output", &ExperimentConfig::output, "write result here");
}

void fixture_flags(FlagSet& f) {
    f.add("--fixture", &ExperimentConfig::fixture, "raster|manifold|blobs")
        .add("--classes", &ExperimentConfig::classes, "number of classes (0: fixture default)")
        .add("--gallery", &ExperimentConfig::gallery, "labeled patterns per class")
        .add("--virtual", &ExperimentConfig::virtual_per_sample, "rotated virtual samples per labeled pattern")
        .add("--deformation", &ExperimentConfig::deformation, "synthetic rasters: stroke jitter redrawn per observation")
        .add("--height", &ExperimentConfig::height, "raster height")
        .add("--width", &ExperimentConfig::width, "raster width")
        .add("--theta-min", &ExperimentConfig::theta_min, "smallest rotation angle (degrees)")
        .add("--theta-max", &ExperimentConfig::theta_max, "largest rotation angle (degrees)");
}

void write_output(const ExperimentConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw DataError("cannot write " + cfg.output);
    file << text;
    if (!file) throw DataError("failed writing " + cfg.output);
}

}  // namespace

void apply_json(ExperimentConfig& cfg, const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

    using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
    auto field = [&cfg]<class T>(T ExperimentConfig::*member) -> Setter {
        return [&cfg, member](const nlohmann::json& v, const std::string& key) { cfg.*member = json_value<T>(v, key); };
    };
    const std::map<std::string, Setter> setters = {
        {"classifier", [&cfg](const nlohmann::json& v, const std::string& k) { cfg.classifier = string_or_list(v, k); }},
        {"k", field(&ExperimentConfig::k)},
        {"sigma", [&cfg](const nlohmann::json& v, const std::string& k) { cfg.sigma = sigma_text(v, k); }},
        {"sigma_cap", field(&ExperimentConfig::sigma_cap)},
        {"mu", field(&ExperimentConfig::mu)},
        {"q", field(&ExperimentConfig::q)},
        {"sigma_kernel", [&cfg](const nlohmann::json& v, const std::string& k) { cfg.sigma_kernel = sigma_text(v, k); }},
        {"similarity_top", field(&ExperimentConfig::similarity_top)},
        {"energy_cutoff", field(&ExperimentConfig::energy_cutoff)},
        {"divergence", field(&ExperimentConfig::divergence)},
        {"r", field(&ExperimentConfig::r)},
        {"m_values", field(&ExperimentConfig::m_values)},
        {"m", field(&ExperimentConfig::m)},
        {"trials", field(&ExperimentConfig::trials)},
        {"seed", field(&ExperimentConfig::seed)},
        {"theta_min", field(&ExperimentConfig::theta_min)},
        {"theta_max", field(&ExperimentConfig::theta_max)},
        {"input", [&cfg](const nlohmann::json& v, const std::string& k) { cfg.input = string_or_list(v, k); }},
        {"output", field(&ExperimentConfig::output)},
        {"fixture", field(&ExperimentConfig::fixture)},
        {"classes", field(&ExperimentConfig::classes)},
        {"observed_class", field(&ExperimentConfig::observed_class)},
        {"gallery", field(&ExperimentConfig::gallery)},
        {"virtual_per_sample", field(&ExperimentConfig::virtual_per_sample)},
        {"deformation", field(&ExperimentConfig::deformation)},
        {"height", field(&ExperimentConfig::height)},
        {"width", field(&ExperimentConfig::width)},
        {"dimension", field(&ExperimentConfig::dimension)},
        {"separation", field(&ExperimentConfig::separation)},
        {"split_train", field(&ExperimentConfig::split_train)},
    };
    for (const auto& [key, value] : doc.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config field '" + key + "'");
        it->second(value, key);
    }
}

ClassifierConfig classifier_config(const ExperimentConfig& cfg) {
    ClassifierConfig c;
    c.k = cfg.k;
    c.sigma = sigma_policy(cfg);
    c.mu = cfg.mu;
    c.q = cfg.q;
    if (cfg.sigma_kernel != "median") c.sigma_kernel = parse_positive(cfg.sigma_kernel, "sigma-kernel");
    c.similarity_top = cfg.similarity_top;
    c.energy_cutoff = cfg.energy_cutoff;
    c.divergence = parse_divergence(cfg.divergence);
    c.validate();
    if (cfg.r < 1) throw ConfigError("r must be >= 1");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Set classification of multiple observations with graph smoothness and subspace baselines", "msc"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expanded help for every subcommand");

    ExperimentConfig scratch;
    std::vector<Binding> bindings;
    std::string config_path;
    std::map<CLI::App*, std::function<std::string(const ExperimentConfig&, std::ostream&)>> handlers;

    auto subcommand = [&](const std::string& name, const std::string& help, auto handler) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file; flags override it");
        handlers[sub] = handler;
        return FlagSet(sub, scratch, bindings);
    };

    {
        auto f = subcommand("classify", "classify the observation set of one dataset file (JSON on stdout)", cmd_classify);
        f.add("--input", &ExperimentConfig::input, "dataset CSV");
        classifier_flags(f);
        common_flags(f);
    }
    {
        auto f = subcommand("sweep", "error rate against the observation set size m (CSV)", cmd_sweep);
        f.add("--input", &ExperimentConfig::input, "pattern CSV; labeled rows are rasters of height x width")
            .add("--m-values", &ExperimentConfig::m_values, "comma list of set sizes")
            .add("--trials", &ExperimentConfig::trials, "realizations per class and m");
        classifier_flags(f);
        fixture_flags(f);
        common_flags(f);
    }
    {
        auto f = subcommand("sessions", "pairwise session protocol, or repeated random splits (JSON)", cmd_sessions);
        f.add("--input", &ExperimentConfig::input, "one labeled CSV per session")
            .add("--r", &ExperimentConfig::r, "keep every r-th sample of each set")
            .add("--split-train", &ExperimentConfig::split_train, "train samples per class for random splits")
            .add("--trials", &ExperimentConfig::trials, "number of random splits");
        classifier_flags(f);
        common_flags(f);
    }
    {
        auto f = subcommand("synth", "write a synthetic dataset CSV", cmd_synth);
        f.add("--m", &ExperimentConfig::m, "observation set size")
            .add("--observed-class", &ExperimentConfig::observed_class, "class of the observation set (1-based)")
            .add("--dimension", &ExperimentConfig::dimension, "blob dimension")
            .add("--separation", &ExperimentConfig::separation, "blob center spacing");
        fixture_flags(f);
        common_flags(f);
    }
    {
        auto f = subcommand("graph", "dump the k-NN similarity graph as an edge list", cmd_graph);
        f.add("--input", &ExperimentConfig::input, "dataset CSV")
            .add("--k", &ExperimentConfig::k, "nearest neighbors per node")
            .add("--sigma", &ExperimentConfig::sigma, "Gaussian edge width, 'median' or a number")
            .add("--sigma-cap", &ExperimentConfig::sigma_cap, "sample cap of the median heuristic");
        common_flags(f);
    }

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        // prints help for the selected subcommand, or the error
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file " + config_path);
            std::stringstream text;
            text << in.rdbuf();
            apply_json(cfg, text.str());
        }
        for (const auto& b : bindings)
            if (b.option->count() > 0) b.copy(cfg, scratch);
        CLI::App* chosen = app.get_subcommands().front();
        const std::string text = handlers.at(chosen)(cfg, err);
        write_output(cfg, text, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace msc::cli
