#include "smforge/compiler.hpp"
#include "smforge/corpus.hpp"
#include "smforge/sim/adapters.hpp"
#include "smforge/sim/kinematics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smforge;
using namespace smforge::sim;

TEST_SUITE("kinematics") {
    TEST_CASE("wheel to body") {
        auto b = wheelToBody(-0.7, -1.0, 12.8, 5.1);
        CHECK(b.v == -10.88);
        CHECK(b.omega == doctest::Approx(-0.3 * 12.8 / 5.1).epsilon(1e-15));
        CHECK(b.omega == doctest::Approx(-0.752941).epsilon(1e-6));

        b = wheelToBody(1.0, -1.0, 12.8, 5.1);
        CHECK(b.v == 0.0);
        CHECK(b.omega == doctest::Approx(-5.019607).epsilon(1e-6));

        b = wheelToBody(0.5, 0.5, 12.8, 5.1);
        CHECK(b.v == 6.4);
        CHECK(b.omega == 0.0);
    }

    TEST_CASE("body to wheel") {
        auto w = bodyToWheel(-10.88, -0.3 * 12.8 / 5.1, 12.8, 5.1);
        CHECK(w.wheels.left == doctest::Approx(-8.96).epsilon(1e-12));
        CHECK(w.wheels.right == doctest::Approx(-12.8).epsilon(1e-12));
        CHECK_FALSE(w.clamped);

        CHECK(bodyToWheel(0.0, 0.0, 12.8, 5.1).wheels == WheelSpeeds{0.0, 0.0});
        CHECK(bodyToWheel(6.4, 0.0, 12.8, 5.1).wheels == WheelSpeeds{6.4, 6.4});

        w = bodyToWheel(20.0, 0.0, 12.8, 5.1);
        CHECK(w.clamped);
        CHECK(w.wheels == WheelSpeeds{12.8, 12.8});
    }

    TEST_CASE("wheel clamping on the body") {
        RobotBody b;
        CHECK(b.setWheels({13.0, -20.0}));
        CHECK(b.wheels == WheelSpeeds{12.8, -12.8});
        CHECK_FALSE(b.setWheels({1.0, 2.0}));
    }

    TEST_CASE("pose integration") {
        RobotBody b;
        b.wheels = {10.0, 10.0};
        auto n = integratePose(b, 0.01);
        CHECK(n.pose.x == doctest::Approx(0.1));
        CHECK(n.pose.y == 0.0);
        CHECK(n.pose.theta == 0.0);

        // omega = pi in place: right - left = pi * L
        const double half = std::numbers::pi * b.wheelDistance / 2.0;
        b.wheels = {-half, half};
        n = integratePose(b, 0.5);
        CHECK(n.pose.x == 0.0);
        CHECK(n.pose.theta == doctest::Approx(std::numbers::pi / 2));
    }

    TEST_CASE("Euler integration follows the closed-form arc") {
        RobotBody b;
        b.pose = {100.0, 100.0, 0.3};
        b.wheels = {-0.7 * 12.8, -1.0 * 12.8};
        const auto vel = bodyVelocity(b.wheels, b.wheelDistance);
        for (int i = 1; i <= 100; ++i) b = integratePose(b, 0.01);
        const double t = 1.0, r = vel.v / vel.omega;
        const double x = 100.0 + r * (std::sin(0.3 + vel.omega * t) - std::sin(0.3));
        const double y = 100.0 - r * (std::cos(0.3 + vel.omega * t) - std::cos(0.3));
        CHECK(std::hypot(b.pose.x - x, b.pose.y - y) < 0.5);
    }
}

TEST_SUITE("adapters") {
    CompiledMachine machine(std::string_view src, std::string_view name) {
        auto r = checkSource(src, "corpus.rcm");
        REQUIRE(r.model);
        return compile(*r.model, name);
    }

    TraceRecord withCall(std::string name, std::vector<Value> args) {
        TraceRecord rec;
        rec.ops.push_back({std::move(name), std::move(args)});
        return rec;
    }

    TEST_CASE("aggregation wheel commands") {
        AggregationAdapter a;
        RobotBody body;
        auto w = a.actuate(withCall("MoveClockwise", {-0.3 * 12.8 / 5.1, -10.88}), body);
        CHECK(w.left == doctest::Approx(-8.96).epsilon(1e-12));
        CHECK(w.right == doctest::Approx(-12.8).epsilon(1e-12));
        w = a.actuate(withCall("RotateClockwise", {-2.0 * 12.8 / 5.1}), body);
        CHECK(w.left == doctest::Approx(12.8).epsilon(1e-12));
        CHECK(w.right == doctest::Approx(-12.8).epsilon(1e-12));
        body.wheels = {1.0, 2.0};
        CHECK(a.actuate(TraceRecord{}, body) == WheelSpeeds{1.0, 2.0});
    }

    TEST_CASE("aggregation events from the line of sight") {
        const auto cm = machine(corpus::aggregationSource(), corpus::kAggregationMachine);
        AggregationAdapter a;
        World w;
        RobotBody r;
        r.pose = {50.0, 50.0, 0.0};
        w.robots.push_back(r);
        a.sense(w, 0);
        std::vector<bool> flags(cm.events.size());
        a.publishEvents(cm, {}, flags);
        CHECK(flags[*cm.eventIndex("seeWall")]);
        CHECK_FALSE(flags[*cm.eventIndex("seeRobot")]);

        r.pose = {100.0, 50.0, 0.0};
        w.robots.push_back(r);
        a.sense(w, 0);
        flags.assign(flags.size(), false);
        a.publishEvents(cm, {}, flags);
        CHECK(flags[*cm.eventIndex("seeRobot")]);
    }

    struct TaxisRig {
        CompiledMachine cm = machine(corpus::taxisSource(), corpus::kTaxisMachine);
        std::vector<Value> vars;
        TaxisAdapter adapter;

        explicit TaxisRig(TaxisParams p = {}) : adapter(p) {
            for (const auto& v : cm.vars) vars.push_back(v.init);
        }

        void call(std::string_view op, std::vector<Value> args = {}) {
            const auto k = *cm.externalIndex(op);
            for (auto& w : adapter.invoke({cm, k, args, vars})) vars[w.slot] = w.value;
        }

        const Value& var(std::string_view n) { return vars[*cm.varIndex(n)]; }
    };

    World around(std::vector<Pose> others) {
        World w;
        w.arena = {400.0, 400.0};
        RobotBody self;
        self.pose = {200.0, 200.0, 0.0};
        w.robots.push_back(self);
        for (const auto& p : others) {
            RobotBody o;
            o.pose = p;
            w.robots.push_back(o);
        }
        return w;
    }

    TEST_CASE("avoidance turns directly away from a neighbor dead ahead") {
        TaxisRig rig;
        rig.adapter.sense(around({{209.0, 200.0, 0.0}}), 0);
        rig.call("CalcAvoidanceHeading");
        CHECK(std::get<double>(rig.var("desiredTurningDegree")) == doctest::Approx(std::numbers::pi));
        CHECK(std::get<bool>(rig.var("reached")) == false);
    }

    TEST_CASE("coherence toward symmetric neighbors needs no turn") {
        TaxisRig rig;
        const double d = 30.0 / std::sqrt(2.0);
        rig.adapter.sense(around({{200.0 + d, 200.0 + d, 0.0}, {200.0 + d, 200.0 - d, 0.0}}), 0);
        rig.call("CalcCoherenceHeading");
        CHECK(std::get<double>(rig.var("desiredTurningDegree")) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("coherence with nobody in range is already done") {
        TaxisRig rig;
        rig.adapter.sense(around({}), 0);
        rig.call("CalcCoherenceHeading");
        CHECK(std::get<bool>(rig.var("reached")));
    }

    TEST_CASE("Turn(pi/2) at 2 rad/s reaches on cycle 8") {
        TaxisParams p;
        p.turnRate = 2.0;
        TaxisRig rig(p);
        const auto w = around({});
        rig.adapter.sense(w, 0);
        rig.call("CalcCoherenceHeading");
        rig.vars[*rig.cm.varIndex("reached")] = false;
        const int expected = static_cast<int>(std::ceil((std::numbers::pi / 2) / 0.2));
        REQUIRE(expected == 8);
        int reachedAt = 0;
        for (int cycle = 1; cycle <= 20 && !reachedAt; ++cycle) {
            rig.adapter.sense(w, 0);
            rig.call("Turn", {std::numbers::pi / 2});
            const auto wheels = rig.adapter.actuate(TraceRecord{}, w.robots[0]);
            CHECK(wheels.right >= 0.0);
            if (std::get<bool>(rig.var("reached"))) reachedAt = cycle;
        }
        CHECK(reachedAt == expected);
    }

    TEST_CASE("avoidance radius follows illumination") {
        TaxisRig rig;
        auto w = around({{300.0, 300.0, 0.0}});
        w.beacon = Point{400.0, 200.0};
        rig.adapter.sense(w, 0);
        rig.call("CheckIlluminationStatus");
        CHECK(std::get<bool>(rig.var("illuminated")));
        // a neighbor at 15 cm counts only with the 0.2 m radius
        w.robots[1].pose = {185.0, 200.0, 0.0};
        rig.adapter.sense(w, 0);
        std::vector<bool> flags(rig.cm.events.size());
        rig.vars[*rig.cm.varIndex("avoidanceRadius")] = 0.1;
        rig.adapter.publishEvents(rig.cm, rig.vars, flags);
        CHECK_FALSE(flags[0]);
        rig.vars[*rig.cm.varIndex("avoidanceRadius")] = 0.2;
        rig.adapter.publishEvents(rig.cm, rig.vars, flags);
        CHECK(flags[0]);
    }

    TEST_CASE("moving forward") {
        TaxisRig rig;
        const auto w = around({});
        rig.adapter.sense(w, 0);
        rig.call("MoveForward");
        CHECK(rig.adapter.actuate(TraceRecord{}, w.robots[0]) == WheelSpeeds{6.4, 6.4});
    }
}
