#include "smforge/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smforge::sim {

namespace {

constexpr int kCollisionPasses = 8;

void clampInside(const Arena& arena, RobotBody& r) {
    r.pose.x = std::clamp(r.pose.x, r.bodyRadius, arena.width - r.bodyRadius);
    r.pose.y = std::clamp(r.pose.y, r.bodyRadius, arena.height - r.bodyRadius);
}

}  // namespace

std::size_t World::substeps() const {
    if (!(physicsDt > 0.0) || !(controlDt > 0.0)) throw std::invalid_argument("time steps must be positive");
    const double ratio = controlDt / physicsDt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n)
        throw std::invalid_argument("control step must be a positive integer multiple of the physics step");
    return static_cast<std::size_t>(n);
}

void resolveCollisions(World& world) {
    auto& robots = world.robots;
    for (int pass = 0; pass < kCollisionPasses; ++pass) {
        bool moved = false;
        for (std::size_t i = 0; i < robots.size(); ++i) {
            for (std::size_t j = i + 1; j < robots.size(); ++j) {
                auto& a = robots[i].pose;
                auto& b = robots[j].pose;
                const double minDist = robots[i].bodyRadius + robots[j].bodyRadius;
                double dx = b.x - a.x;
                double dy = b.y - a.y;
                const double d = std::hypot(dx, dy);
                if (d >= minDist) continue;
                if (d == 0.0) {
                    dx = 1.0;
                    dy = 0.0;
                } else {
                    dx /= d;
                    dy /= d;
                }
                const double push = (minDist - d) / 2.0;
                a.x -= dx * push;
                a.y -= dy * push;
                b.x += dx * push;
                b.y += dy * push;
                moved = true;
            }
        }
        for (auto& r : robots) clampInside(world.arena, r);
        if (!moved) break;
    }
}

void physicsStep(World& world) {
    for (auto& r : world.robots) r = integratePose(r, world.physicsDt);
    for (auto& r : world.robots) clampInside(world.arena, r);
    resolveCollisions(world);
}

}  // namespace smforge::sim
