#include "smforge/sim/metrics.hpp"
#include "smforge/sim/scenario.hpp"
#include "smforge/sim/sensors.hpp"
#include "smforge/sim/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smforge;
using namespace smforge::sim;

namespace {

World worldOf(std::vector<Pose> poses, Arena arena = {400.0, 400.0}) {
    World w;
    w.arena = arena;
    for (const auto& p : poses) {
        RobotBody b;
        b.pose = p;
        w.robots.push_back(b);
    }
    return w;
}

}  // namespace

TEST_SUITE("sensors") {
    TEST_CASE("line of sight") {
        CHECK(raycastLineOfSight(worldOf({{100, 100, 0}, {150, 100, 0}}), 0) == LosHit::Robot);
        CHECK(raycastLineOfSight(worldOf({{100, 100, 0}}), 0) == LosHit::Wall);
        CHECK(raycastLineOfSight(worldOf({{100, 100, 0}, {150, 110, 0}}), 0) == LosHit::Wall);
        CHECK(raycastLineOfSight(worldOf({{100, 100, 0}, {150, 103, 0}}), 0) == LosHit::Robot);
        // behind the robot does not count
        CHECK(raycastLineOfSight(worldOf({{100, 100, 0}, {50, 100, 0}}), 0) == LosHit::Wall);
    }

    TEST_CASE("line of sight along a wall") {
        // heading straight down the bottom wall, the ray ends at the far corner
        CHECK(raycastLineOfSight(worldOf({{100, 0, 0}}), 0) == LosHit::Wall);
        CHECK(raycastLineOfSight(worldOf({{100, 0, 0}, {200, 0, 0}}), 0) == LosHit::Robot);
    }

    TEST_CASE("neighbors") {
        auto w = worldOf({{100, 100, 0}, {115, 100, 0}});
        auto ns = neighborsWithin(w, 0, 20.0);
        REQUIRE(ns.size() == 1);
        CHECK(ns[0].index == 1);
        CHECK(ns[0].range == doctest::Approx(15.0));
        CHECK(ns[0].bearing == doctest::Approx(0.0));
        CHECK(neighborsWithin(w, 0, 10.0).empty());

        w = worldOf({{0, 0, 0}, {10, 0, 0}, {30, 0, 0}});
        ns = neighborsWithin(w, 0, 20.0);
        REQUIRE(ns.size() == 1);
        CHECK(ns[0].index == 1);

        w = worldOf({{100, 100, std::numbers::pi / 2}, {100, 130, 0}, {90, 100, 0}});
        ns = neighborsWithin(w, 0, 50.0);
        REQUIRE(ns.size() == 2);
        CHECK(ns[0].index == 2);
        CHECK(ns[0].bearing == doctest::Approx(std::numbers::pi / 2));
        CHECK(ns[1].bearing == doctest::Approx(0.0).epsilon(1e-12));
        CHECK_THROWS_AS(neighborsWithin(w, 0, 0.0), std::invalid_argument);
    }

    TEST_CASE("illumination") {
        auto w = worldOf({{0, 0, 0}, {50, 0, 0}}, {200, 200});
        w.beacon = Point{100, 0};
        CHECK_FALSE(isIlluminated(w, 0));
        w.robots[1].pose = {50, 10, 0};
        CHECK(isIlluminated(w, 0));
        w.robots.pop_back();
        CHECK(isIlluminated(w, 0));
        w.beacon.reset();
        CHECK_THROWS_AS(isIlluminated(w, 0), std::invalid_argument);
    }
}

TEST_SUITE("world") {
    TEST_CASE("overlapping pair is pushed apart symmetrically") {
        auto w = worldOf({{100, 100, 0}, {105, 100, 0}});
        resolveCollisions(w);
        const auto& a = w.robots[0].pose;
        const auto& b = w.robots[1].pose;
        CHECK(std::hypot(b.x - a.x, b.y - a.y) == doctest::Approx(7.4));
        CHECK((a.x + b.x) / 2 == doctest::Approx(102.5));
        CHECK(a.y == 100.0);
    }

    TEST_CASE("walls clamp centers inside by the body radius") {
        auto w = worldOf({{2, 100, 0}, {100, 399, 0}});
        resolveCollisions(w);
        CHECK(w.robots[0].pose.x == doctest::Approx(3.7));
        CHECK(w.robots[1].pose.y == doctest::Approx(400 - 3.7));
    }

    TEST_CASE("separated robots stay put") {
        auto w = worldOf({{100, 100, 0}, {120, 100, 1}});
        const auto before = w.robots;
        resolveCollisions(w);
        CHECK(w.robots[0].pose == before[0].pose);
        CHECK(w.robots[1].pose == before[1].pose);
    }

    TEST_CASE("substeps") {
        World w;
        CHECK(w.substeps() == 10);
        w.physicsDt = 0.03;
        CHECK_THROWS_AS(w.substeps(), std::invalid_argument);
        w.physicsDt = 0.2;
        CHECK_THROWS_AS(w.substeps(), std::invalid_argument);
        w.physicsDt = 0.0;
        CHECK_THROWS_AS(w.substeps(), std::invalid_argument);
    }
}

TEST_SUITE("metrics") {
    TEST_CASE("cluster fraction") {
        CHECK(clusterFraction(worldOf({{0, 0, 0}, {5, 0, 0}, {10, 0, 0}}), 10.0) == 1.0);
        CHECK(clusterFraction(worldOf({{0, 0, 0}, {5, 0, 0}, {100, 0, 0}}), 10.0) == doctest::Approx(2.0 / 3.0));
        CHECK(clusterFraction(worldOf({{0, 0, 0}}), 10.0) == 1.0);
        // chained, not pairwise
        CHECK(clusterFraction(worldOf({{0, 0, 0}, {9, 0, 0}, {18, 0, 0}, {27, 0, 0}}), 10.0) == 1.0);
    }

    TEST_CASE("taxis metrics") {
        auto w = worldOf({{0, 0, 0}, {2, 0, 0}});
        w.beacon = Point{10, 0};
        auto m = taxisMetrics(w);
        CHECK(m.centroidBeaconDistance == doctest::Approx(9.0));
        CHECK(m.maxSpread == doctest::Approx(1.0));

        w = worldOf({{10, 0, 0}, {10, 0, 0}});
        w.beacon = Point{10, 0};
        CHECK(taxisMetrics(w).centroidBeaconDistance == 0.0);

        w = worldOf({{3, 4, 0}});
        w.beacon = Point{0, 0};
        m = taxisMetrics(w);
        CHECK(m.centroidBeaconDistance == doctest::Approx(5.0));
        CHECK(m.maxSpread == 0.0);

        w.beacon.reset();
        CHECK_THROWS_AS(taxisMetrics(w), std::invalid_argument);
    }
}

TEST_SUITE("simulation") {
    std::unique_ptr<RobotAdapter> aggregationAdapter() { return std::make_unique<AggregationAdapter>(); }

    TEST_CASE("lone robot facing a wall arcs clockwise backwards") {
        auto machine = std::make_shared<const CompiledMachine>(builtinController(Platform::Aggregation));
        auto w = worldOf({{125, 125, 0.5}}, {250, 250});
        Simulation sim(w, machine, aggregationAdapter);
        for (int c = 0; c < 10; ++c) {
            const auto trace = sim.step();
            CHECK(trace[0].stateAfter == "S1");
        }
        const auto& p = sim.world().robots[0].pose;
        const double v = -10.88, omega = -0.3 * 12.8 / 5.1, r = v / omega;
        const double x = 125 + r * (std::sin(0.5 + omega) - std::sin(0.5));
        const double y = 125 - r * (std::cos(0.5 + omega) - std::cos(0.5));
        CHECK(std::hypot(p.x - x, p.y - y) < 0.5);
        CHECK(sim.world().clockS == doctest::Approx(1.0));
    }

    TEST_CASE("two robots facing each other rotate in place") {
        auto machine = std::make_shared<const CompiledMachine>(builtinController(Platform::Aggregation));
        auto w = worldOf({{100, 125, 0}, {150, 125, std::numbers::pi}}, {250, 250});
        Simulation sim(w, machine, aggregationAdapter);
        const auto trace = sim.step();
        REQUIRE(trace.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(trace[i].stateAfter == "S2");
            const auto vel = bodyVelocity(sim.world().robots[i].wheels, 5.1);
            CHECK(std::abs(vel.v) < 0.01);
            CHECK(vel.omega < 0.0);
        }
        CHECK(sim.world().robots[0].pose.x == doctest::Approx(100.0));
    }

    TEST_CASE("bad substep configuration is rejected") {
        auto machine = std::make_shared<const CompiledMachine>(builtinController(Platform::Aggregation));
        auto w = worldOf({{100, 125, 0}}, {250, 250});
        w.physicsDt = 0.0;
        CHECK_THROWS_AS(Simulation(w, machine, aggregationAdapter), std::invalid_argument);
    }

    TEST_CASE("a controller fault names the robot") {
        auto cm = builtinController(Platform::Aggregation);
        for (auto& v : cm.vars)
            if (v.name == "vr0") v.init = 0.5;
        auto machine = std::make_shared<const CompiledMachine>(cm);
        Simulation sim(worldOf({{100, 125, 0}, {200, 125, 0}}, {250, 250}), machine, aggregationAdapter);
        try {
            sim.step();
            FAIL("expected a fault");
        } catch (const SimulationFault& e) {
            CHECK(e.robot() == 0);
            CHECK(std::string(e.what()).find("preconditionViolation MoveClockwise") != std::string::npos);
        }
    }
}
