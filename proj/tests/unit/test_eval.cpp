#include "msc/eval.hpp"
#include "msc/fixtures.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>

using namespace msc;
using namespace msc::eval;

namespace {

// Blobs far apart: every classifier should be exact.
SweepSpec blob_sweep(int trials, std::uint64_t seed) {
    SweepSpec spec;
    spec.classes = 3;
    spec.factory = [](ClassId cls, std::size_t m, std::uint64_t s) {
        return fixtures::gaussian_blobs(3, 4, 12, m, cls, 20.0, s);
    };
    spec.m_values = {3, 12};
    spec.trials = trials;
    spec.seed = seed;
    spec.config.q = 2;
    return spec;
}

std::vector<Session> blob_sessions(int sessions, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Session> out;
    for (int s = 0; s < sessions; ++s) {
        Session session;
        for (int c = 0; c < 3; ++c) {
            // class c spreads along axis c and sits on axis c+1
            Matrix X = 0.2 * oracle::gaussian_matrix(3, 14, rng);
            X.row(c) *= 15.0;
            X.row((c + 1) % 3).array() += 15.0;
            session.push_back(X);
        }
        out.push_back(session);
    }
    return out;
}

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("error rate") {
        const std::vector<std::pair<ClassId, ClassId>> right{{0, 0}, {1, 1}, {2, 2}};
        CHECK(error_rate(right) == 0.0);
        const std::vector<std::pair<ClassId, ClassId>> wrong{{0, 1}, {1, 0}};
        CHECK(error_rate(wrong) == 1.0);
        std::vector<std::pair<ClassId, ClassId>> mixed(10, {1, 1});
        mixed[2] = {0, 1};
        mixed[5] = {2, 1};
        mixed[9] = {0, 1};
        CHECK(error_rate(mixed) == doctest::Approx(0.3).epsilon(1e-15));
        CHECK_THROWS_AS(error_rate({}), DataError);
    }

    TEST_CASE("session metric averages the six ordered pairs") {
        Matrix e = Matrix::Constant(3, 3, 0.1);
        e.diagonal().setConstant(0.9);
        CHECK(session_metric(e) == doctest::Approx(0.1).epsilon(1e-15));
        Matrix f = Matrix::Zero(3, 3);
        f(2, 1) = 0.6;
        CHECK(session_metric(f) == doctest::Approx(0.1).epsilon(1e-15));
        Matrix g = Matrix::Zero(3, 3);
        g(0, 1) = 6.0;
        g(1, 0) = 6.0;
        CHECK(session_metric(g) == 2.0);  // 12 / 6 terms
        Matrix h = Matrix::Constant(4, 4, 0.25);
        CHECK(session_metric(h) == 0.25);
        CHECK_THROWS_AS(session_metric(Matrix::Zero(1, 1)), DataError);
    }

    TEST_CASE("summaries use integer counts and the n-1 standard deviation") {
        const std::vector<int> wrong{0, 1, 2, 1};
        const auto r = summarize("masc", 30, 7, wrong, 10);
        CHECK(r.mean_error == 0.1);
        CHECK(r.std_error == doctest::Approx(std::sqrt(0.02 / 3)).epsilon(1e-14));
        CHECK(r.trials == 4);
        CHECK(r.trial_errors == std::vector<double>{0.0, 0.1, 0.2, 0.1});
        const std::vector<int> one{3};
        CHECK(summarize("lp", 1, 0, one, 4).std_error == 0.0);
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("trial seeds differ per realization") {
        CHECK(trial_seed(1, 10, 0, 0) != trial_seed(1, 10, 0, 1));
        CHECK(trial_seed(1, 10, 0, 0) != trial_seed(1, 10, 1, 0));
        CHECK(trial_seed(1, 10, 0, 0) != trial_seed(1, 30, 0, 0));
        CHECK(trial_seed(1, 10, 0, 0) == trial_seed(1, 10, 0, 0));
    }

    TEST_CASE("separable data has zero error at every m with one trial") {
        auto spec = blob_sweep(1, 3);
        // isotropic blobs give MSM nothing to compare, so it sits this one out
        spec.methods = {Method::masc, Method::lp, Method::kmsm, Method::kld};
        const auto reports = observation_sweep(spec);
        REQUIRE(reports.size() == 8);
        for (const auto& r : reports) {
            CHECK(r.mean_error == 0.0);
            CHECK(r.std_error == 0.0);
            CHECK(r.trials == 1);
        }
        CHECK(reports[0].m == 3);
        CHECK(reports[0].classifier == "masc");
        CHECK(reports[1].classifier == "lp");
        CHECK(reports[4].m == 12);
    }

    TEST_CASE("same seed gives identical reports for any thread count") {
        auto spec = blob_sweep(4, 11);
        spec.factory = [](ClassId cls, std::size_t m, std::uint64_t s) {
            return fixtures::gaussian_blobs(3, 4, 6, m, cls, 1.2, s);  // overlapping: errors vary
        };
        spec.methods = {Method::masc, Method::lp};
        spec.threads = 1;
        const auto a = observation_sweep(spec);
        const auto b = observation_sweep(spec);
        spec.threads = 4;
        const auto c = observation_sweep(spec);
        std::ostringstream sa, sc;
        write_reports_csv(sa, a);
        write_reports_csv(sc, c);
        CHECK(sa.str() == sc.str());
        CHECK(reports_json(a) == reports_json(b));
        CHECK(reports_json(a) == reports_json(c));
        spec.seed = 12;
        CHECK(reports_json(a) != reports_json(observation_sweep(spec)));
    }

    TEST_CASE("rotated raster fixture improves from m=10 to m=50") {
        fixtures::RasterFixtureConfig cfg;
        cfg.seed = 1;
        const auto fixture = fixtures::RotationFixture::synthetic(cfg);
        SweepSpec spec;
        spec.classes = fixture.classes();
        spec.factory = [&](ClassId cls, std::size_t m, std::uint64_t s) { return fixture.trial(cls, m, s); };
        spec.m_values = {10, 50};
        spec.trials = 8;
        spec.seed = 5;
        const auto reports = observation_sweep(spec);
        REQUIRE(reports.size() == 2);
        CHECK(reports[1].mean_error <= reports[0].mean_error);
    }

    TEST_CASE("invalid sweeps") {
        auto spec = blob_sweep(1, 0);
        spec.m_values.clear();
        CHECK_THROWS_AS(observation_sweep(spec), ConfigError);
        spec = blob_sweep(0, 0);
        CHECK_THROWS_AS(observation_sweep(spec), ConfigError);
    }

    TEST_CASE("csv layout") {
        const std::vector<int> wrong{1, 0};
        const std::vector<TrialReport> reports{summarize("masc", 10, 3, wrong, 4)};
        std::ostringstream out;
        write_reports_csv(out, reports);
        CHECK(out.str() == "m,classifier,mean_error,std_error,trials,seed\n10,masc,0.125,0.1767766952966369,2,3\n");
        const auto j = nlohmann::json::parse(reports_json(reports));
        CHECK(j[0]["mean_error"] == 0.125);
        CHECK(j[0]["trial_errors"].size() == 2);
    }
}

TEST_SUITE("sessions") {
    TEST_CASE("separable sessions give a zero table") {
        const auto sessions = blob_sessions(3, 1);
        ClassifierConfig cfg;
        cfg.q = 1;  // two planes in R^3 always share a line
        for (auto method : {Method::masc, Method::msm, Method::kld}) {
            const auto r = run_sessions(sessions, method, cfg, 1, 1);
            CHECK(r.pair_errors.rows() == 3);
            CHECK(r.mean_error == 0.0);
        }
        const auto r = run_sessions(sessions, Method::masc, cfg, 2, 2);
        CHECK(r.step == 2);
        const auto j = nlohmann::json::parse(session_json(r));
        CHECK(j["r"] == 2);
        CHECK(j["pair_errors"].size() == 3);
    }

    TEST_CASE("session table is independent of the thread count") {
        Rng rng(4);
        std::vector<Session> sessions;
        for (int s = 0; s < 3; ++s) {
            Session session;
            for (int c = 0; c < 3; ++c) {
                Matrix X = oracle::gaussian_matrix(3, 10, rng);
                X.row(c).array() += 1.0;
                session.push_back(X);
            }
            sessions.push_back(session);
        }
        const auto a = run_sessions(sessions, Method::lp, ClassifierConfig{}, 1, 1);
        const auto b = run_sessions(sessions, Method::lp, ClassifierConfig{}, 1, 4);
        CHECK(session_json(a) == session_json(b));
        CHECK(a.mean_error == doctest::Approx(session_metric(a.pair_errors)).epsilon(1e-15));
    }

    TEST_CASE("mismatched sessions are rejected") {
        auto sessions = blob_sessions(2, 2);
        sessions[1].pop_back();
        CHECK_THROWS_AS(run_sessions(sessions, Method::masc, ClassifierConfig{}, 1), DataError);
        CHECK_THROWS_AS(run_sessions(std::span(sessions).first(1), Method::masc, ClassifierConfig{}, 1), DataError);
    }

    TEST_CASE("random splits are reproducible and exact on separable sets") {
        const auto sets = blob_sessions(1, 9)[0];
        ClassifierConfig cfg;
        cfg.q = 2;
        const auto a = run_random_split(sets, 6, 5, 3, Method::masc, cfg, 1, 1);
        const auto b = run_random_split(sets, 6, 5, 3, Method::masc, cfg, 1, 3);
        CHECK(a.trials == 5);
        CHECK(a.mean_error == 0.0);
        CHECK(reports_json(std::vector{a}) == reports_json(std::vector{b}));
        CHECK_THROWS_AS(run_random_split(sets, 14, 5, 3, Method::masc, cfg), DataError);
    }
}
