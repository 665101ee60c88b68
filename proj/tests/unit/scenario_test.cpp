#include "smforge/sim/metrics.hpp"
#include "smforge/sim/rng.hpp"
#include "smforge/sim/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace smforge;
using namespace smforge::sim;

TEST_SUITE("rng") {
    TEST_CASE("streams are reproducible and distinct") {
        auto a = makeStream(42, 0);
        auto b = makeStream(42, 0);
        auto c = makeStream(42, 1);
        auto d = makeStream(43, 0);
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
        CHECK(x != d());
    }

    TEST_CASE("unit doubles lie in [0, 1)") {
        auto g = makeStream(1, 0);
        double lo = 1.0, hi = 0.0, sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double u = unitDouble(g);
            lo = std::min(lo, u);
            hi = std::max(hi, u);
            sum += u;
        }
        CHECK(lo >= 0.0);
        CHECK(hi < 1.0);
        CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_SUITE("scenario files") {
    TEST_CASE("full document") {
        const auto c = parseScenario(R"({
            "arena": {"w_cm": 400, "h_cm": 300},
            "robots": 12,
            "seed": 9,
            "duration_s": 50,
            "controller": "taxis",
            "beacon": {"x_cm": 400, "y_cm": 150},
            "params": {"turn_rate_rad_s": 2.0, "coherence_range_cm": 100},
            "outputs": {"trace": "t.ndjson", "metrics": "m.csv"}
        })",
                                     "/base");
        CHECK(c.arena.width == 400);
        CHECK(c.arena.height == 300);
        CHECK(c.robots == 12);
        CHECK(c.seed == 9);
        CHECK(c.durationS == 50);
        CHECK(c.platform == Platform::Taxis);
        REQUIRE(c.beacon);
        CHECK(c.beacon->x == 400);
        CHECK(c.params.turnRateRadS == 2.0);
        CHECK(c.params.coherenceRangeCm == 100);
        CHECK(c.params.forwardSpeedCmS == 6.4);
        CHECK(c.tracePath == std::filesystem::path("/base/t.ndjson"));
        CHECK(c.metricsPath == std::filesystem::path("/base/m.csv"));
        CHECK_NOTHROW(c.validate());
    }

    TEST_CASE("compiled controller form") {
        const auto c = parseScenario(R"({"controller": {"ir": "agg.smir.json", "platform": "aggregation"}})", "/m");
        CHECK(c.irPath == std::filesystem::path("/m/agg.smir.json"));
        CHECK(c.platform == Platform::Aggregation);
        CHECK(c.durationS == 300.0);
    }

    TEST_CASE("rejections") {
        const char* bad[] = {
            R"({"controller": "aggregation", "bogus": 1})",
            R"({"controller": "aggregation", "params": {"warp": 1}})",
            R"({"controller": "nope"})",
            R"({"controller": {"ir": "x.smir.json"}})",
            R"({"controller": "aggregation", "robots": "many"})",
            R"([1, 2])",
            R"({"controller": )",
        };
        for (const auto* doc : bad) {
            CAPTURE(doc);
            CHECK_THROWS_AS(parseScenario(doc).validate(), ScenarioError);
        }
    }

    TEST_CASE("validation") {
        ScenarioConfig c;
        CHECK_NOTHROW(c.validate());
        c.durationS = 0;
        CHECK_THROWS_AS(c.validate(), ScenarioError);
        c = {};
        c.robots = 0;
        CHECK_THROWS_AS(c.validate(), ScenarioError);
        c = {};
        c.platform = Platform::Taxis;
        try {
            c.validate();
            FAIL("taxis without beacon accepted");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("beacon required") != std::string::npos);
        }
        c = {};
        c.params.physicsDtS = 0.03;
        CHECK_THROWS_AS(c.validate(), ScenarioError);
    }
}

TEST_SUITE("placement") {
    TEST_CASE("aggregation robots fill the arena without overlap") {
        ScenarioConfig c;
        const auto w = initialWorld(c);
        REQUIRE(w.robots.size() == 20);
        for (std::size_t i = 0; i < w.robots.size(); ++i) {
            const auto& p = w.robots[i].pose;
            CHECK(p.x >= 3.7);
            CHECK(p.x <= 250 - 3.7);
            CHECK(p.theta > -M_PI - 1e-12);
            CHECK(p.theta <= M_PI);
            for (std::size_t j = 0; j < i; ++j) {
                const auto& q = w.robots[j].pose;
                CHECK(std::hypot(p.x - q.x, p.y - q.y) >= 7.4);
            }
        }
        const auto again = initialWorld(c);
        for (std::size_t i = 0; i < w.robots.size(); ++i) CHECK(again.robots[i].pose == w.robots[i].pose);
        c.seed = 2;
        CHECK_FALSE(initialWorld(c).robots[0].pose == w.robots[0].pose);
    }

    TEST_CASE("taxis robots start in the left third") {
        ScenarioConfig c;
        c.platform = Platform::Taxis;
        c.arena = {400, 400};
        c.beacon = Point{400, 200};
        const auto w = initialWorld(c);
        for (const auto& r : w.robots) CHECK(r.pose.x <= 400.0 / 3.0);
        REQUIRE(w.beacon);
    }

    TEST_CASE("impossible packing is reported") {
        ScenarioConfig c;
        c.arena = {20, 20};
        c.robots = 50;
        CHECK_THROWS_AS(initialWorld(c), ScenarioError);
    }
}

TEST_SUITE("runs") {
    TEST_CASE("short aggregation run") {
        ScenarioConfig c;
        c.durationS = 5;
        const auto r = runScenario(c, builtinController(Platform::Aggregation), true);
        REQUIRE(r.rows.size() == 5);
        CHECK(r.rows.front().t == 1);
        CHECK(r.rows.back().t == 5);
        CHECK_FALSE(r.rows.back().taxis);
        std::size_t lines = 0;
        for (char ch : r.trace) lines += ch == '\n';
        CHECK(lines == 5 * 10 * 20);

        const auto csv = metricsCsv(c, r.rows);
        std::istringstream in(csv);
        std::string header, columns, first;
        std::getline(in, header);
        std::getline(in, columns);
        std::getline(in, first);
        CHECK(header.rfind("# smforge ", 0) == 0);
        CHECK(header.find("seed=1") != std::string::npos);
        CHECK(header.find("rng=mt19937_64/seed_seq") != std::string::npos);
        CHECK(columns == "t_s,cluster_fraction,centroid_beacon_dist_cm,max_spread_cm");
        CHECK(first.rfind("1,", 0) == 0);
        CHECK(first.size() > 2);
        CHECK(first.substr(first.size() - 2) == ",,");
    }

    TEST_CASE("taxis rows carry beacon metrics") {
        ScenarioConfig c;
        c.platform = Platform::Taxis;
        c.arena = {400, 400};
        c.beacon = Point{400, 200};
        c.durationS = 3;
        const auto r = runScenario(c, builtinController(Platform::Taxis));
        REQUIRE(r.rows.size() == 3);
        CHECK(r.rows.back().taxis);
        CHECK(r.initial.taxis);
        CHECK(r.trace.empty());
    }

    TEST_CASE("identical seeds give identical runs") {
        ScenarioConfig c;
        c.durationS = 10;
        const auto m = builtinController(Platform::Aggregation);
        CHECK(metricsCsv(c, runScenario(c, m).rows) == metricsCsv(c, runScenario(c, m).rows));
    }
}
