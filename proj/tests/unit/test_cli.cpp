#include "msc/cli.hpp"
#include "msc/data.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace msc;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "msc");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "msc_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto path = scratch_dir() / name;
    std::ofstream(path) << text;
    return path.string();
}

// Blob dataset whose observations come from class 2 of 3.
std::string blob_file() {
    const auto path = (scratch_dir() / "blobs.csv").string();
    const auto r = run({"synth", "--fixture", "blobs", "--classes", "3", "--observed-class", "2", "--m", "8",
                        "--gallery", "10", "--dimension", "3", "--separation", "8", "--seed", "4", "--output", path});
    REQUIRE(r.code == 0);
    return path;
}

// Labeled-only session file: class c varies along axis c and is offset on axis c+1.
std::string session_file(const std::string& name, std::uint64_t seed) {
    Rng rng(seed);
    std::ostringstream text;
    text << "#d=3,c=3\n";
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 12; ++i) {
            double x[3];
            for (int a = 0; a < 3; ++a) x[a] = 0.2 * rng.normal();
            x[c] *= 15.0;
            x[(c + 1) % 3] += 15.0;
            text << c + 1 << ',' << data::format_real(x[0]) << ',' << data::format_real(x[1]) << ','
                 << data::format_real(x[2]) << '\n';
        }
    return write_file(name, text.str());
}

}  // namespace

TEST_SUITE("classify") {
    TEST_CASE("separable fixture gives the JSON schema and the right class") {
        const auto input = blob_file();
        for (const std::string method : {"masc", "lp", "msm", "kmsm", "kld"}) {
            const auto r = run({"classify", "--classifier", method, "--k", "5", "--q", "2", "--input", input});
            REQUIRE(r.code == 0);
            const auto j = nlohmann::json::parse(r.out);
            std::vector<std::string> keys;
            for (const auto& [key, value] : j.items()) keys.push_back(key);
            CHECK(keys.size() == 9);
            for (const char* key : {"classifier", "decision", "scores", "tie", "n", "l", "m", "c", "seed"})
                CHECK(j.contains(key));
            CHECK(j["classifier"] == method);
            CHECK(j["scores"].size() == 3);
            CHECK(j["c"] == 3);
            CHECK(j["m"] == 8);
            CHECK(j["l"] == 30);
            CHECK(j["n"] == 38);
            if (method != "msm") CHECK(j["decision"] == 2);  // isotropic blobs carry no subspace signal
            CHECK(r.out.back() == '\n');
        }
    }

    TEST_CASE("k = 0 is a config error naming the constraint") {
        const auto r = run({"classify", "--k", "0", "--input", blob_file()});
        CHECK(r.code == cli::kExitConfig);
        CHECK(r.err.find("k must be >= 1") != std::string::npos);
        CHECK(r.out.empty());
    }

    TEST_CASE("bad values and unknown classifiers are config errors") {
        const auto input = blob_file();
        CHECK(run({"classify", "--classifier", "svm", "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--sigma", "-1", "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--mu", "0", "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--k", "abc", "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--divergence", "sideways", "--input", input}).code == cli::kExitConfig);
        CHECK(run({"nonsense"}).code == cli::kExitConfig);
        CHECK(run({}).code == cli::kExitConfig);
    }

    TEST_CASE("missing or malformed data files exit with 3") {
        CHECK(run({"classify", "--input", (scratch_dir() / "absent.csv").string()}).code == cli::kExitData);
        const auto bad = write_file("bad.csv", "#d=2,c=2\n1,0,1\n0,1\n");
        const auto r = run({"classify", "--input", bad});
        CHECK(r.code == cli::kExitData);
        CHECK(r.err.find("line 3") != std::string::npos);
    }

    TEST_CASE("flags override the config file, which overrides defaults") {
        const auto input = blob_file();
        const auto cfg = write_file("cfg.json", R"({"classifier": "lp", "k": 0})");
        CHECK(run({"classify", "--config", cfg, "--input", input}).code == cli::kExitConfig);
        const auto r = run({"classify", "--config", cfg, "--k", "4", "--input", input});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["classifier"] == "lp");
        const auto s = run({"classify", "--config", cfg, "--k", "4", "--classifier", "kld", "--input", input});
        CHECK(nlohmann::json::parse(s.out)["classifier"] == "kld");
        const auto with_input = write_file("cfg_input.json", R"({"input": ")" + input + R"("})");
        CHECK(run({"classify", "--config", with_input}).code == 0);
    }

    TEST_CASE("unknown config fields and wrong types are rejected") {
        const auto input = blob_file();
        const auto unknown = write_file("unknown.json", R"({"kk": 5})");
        const auto r = run({"classify", "--config", unknown, "--input", input});
        CHECK(r.code == cli::kExitConfig);
        CHECK(r.err.find("unknown config field 'kk'") != std::string::npos);
        CHECK(run({"classify", "--config", write_file("type.json", R"({"k": "five"})"), "--input", input}).code ==
              cli::kExitConfig);
        CHECK(run({"classify", "--config", write_file("array.json", "[1]"), "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--config", write_file("broken.json", "{"), "--input", input}).code == cli::kExitConfig);
        CHECK(run({"classify", "--config", (scratch_dir() / "none.json").string(), "--input", input}).code ==
              cli::kExitConfig);
    }

    TEST_CASE("apply_json sets only the given fields") {
        cli::ExperimentConfig cfg;
        cli::apply_json(cfg, R"({"sigma": 0.5, "m_values": [10, 50], "classifier": ["masc", "lp"], "trials": 3})");
        CHECK(cfg.sigma == "0.5");
        CHECK(cfg.m_values == std::vector<std::size_t>{10, 50});
        CHECK(cfg.classifier == std::vector<std::string>{"masc", "lp"});
        CHECK(cfg.trials == 3);
        CHECK(cfg.k == 5);
        CHECK(cfg.q == 9);
        CHECK(cfg.energy_cutoff == 0.96);
        CHECK(cfg.theta_min == -40.0);
        CHECK(cfg.theta_max == 40.0);
        const auto cc = cli::classifier_config(cfg);
        CHECK(std::get<graph::FixedSigma>(cc.sigma).value == 0.5);
    }

    TEST_CASE("help exits cleanly") {
        const auto r = run({"sweep", "--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("--m-values") != std::string::npos);
    }
}

TEST_SUITE("other subcommands") {
    TEST_CASE("sweep with a fixed seed is byte-identical across runs") {
        const std::vector<std::string> args{"sweep", "--classes", "3", "--m-values", "4,8", "--trials", "2",
                                            "--classifier", "masc,lp", "--seed", "9"};
        const auto a = run(args);
        const auto b = run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.rfind("m,classifier,mean_error,std_error,trials,seed\n", 0) == 0);
        std::istringstream lines(a.out);
        std::string line;
        int rows = 0;
        while (std::getline(lines, line)) ++rows;
        CHECK(rows == 5);
        CHECK(a.out.find("\n8,lp,") != std::string::npos);
    }

    TEST_CASE("manifold sweep runs") {
        const auto r = run({"sweep", "--fixture", "manifold", "--m-values", "6", "--trials", "1", "--q", "3", "--classifier",
                            "masc,kmsm"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("6,kmsm,") != std::string::npos);
        CHECK(run({"sweep", "--fixture", "blobs"}).code == cli::kExitConfig);
    }

    TEST_CASE("graph dumps a 1-based edge list") {
        const auto r = run({"graph", "--input", blob_file(), "--k", "3"});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        int i = 0, j = 0;
        double w = 0.0;
        int edges = 0;
        while (in >> i >> j >> w) {
            ++edges;
            CHECK(i < j);
            CHECK(i >= 1);
            CHECK(j <= 38);
            CHECK(w > 0.0);
            CHECK(w <= 1.0);
        }
        CHECK(edges >= 38 * 3 / 2);
    }

    TEST_CASE("synth output parses back as a dataset") {
        const auto r = run({"synth", "--classes", "4", "--m", "6", "--observed-class", "3", "--seed", "2"});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        const auto ds = data::read_dataset(in);
        CHECK(ds.classes() == 4);
        CHECK(ds.observation_count() == 6);
        CHECK(ds.labeled_count() == 8);
        CHECK(ds.virtual_count() == 32);
        CHECK(ds.dimension() == 256);
        CHECK(run({"synth", "--observed-class", "11"}).code == cli::kExitConfig);
        const auto m = run({"synth", "--fixture", "manifold", "--m", "5"});
        REQUIRE(m.code == 0);
        std::istringstream min(m.out);
        CHECK(data::read_dataset(min).dimension() == 20);
    }

    TEST_CASE("sessions over files and random splits") {
        const auto s1 = session_file("s1.csv", 1);
        const auto s2 = session_file("s2.csv", 2);
        const auto s3 = session_file("s3.csv", 3);
        const auto r = run({"sessions", "--input", s1 + "," + s2 + "," + s3, "--classifier", "msm", "--q", "1", "--r", "2"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["classifier"] == "msm");
        CHECK(j["r"] == 2);
        CHECK(j["pair_errors"].size() == 3);
        CHECK(j["mean_error"] == 0.0);
        CHECK(run({"sessions", "--input", s1}).code == cli::kExitConfig);
        const auto split = run({"sessions", "--input", s1, "--split-train", "6", "--trials", "3", "--seed", "1"});
        REQUIRE(split.code == 0);
        const auto k = nlohmann::json::parse(split.out);
        CHECK(k["trials"] == 3);
        CHECK(k["train_per_class"] == 6);
    }

    TEST_CASE("output goes to the --output file when given") {
        const auto path = (scratch_dir() / "out.json").string();
        fs::remove(path);
        const auto r = run({"classify", "--input", blob_file(), "--output", path});
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        CHECK(nlohmann::json::parse(text.str())["decision"] == 2);
    }
}
