#include "smforge/sim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smforge::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smallest t >= 0 at which p + t*d (|d| = 1) is inside the disc, or inf.
double rayDisc(double px, double py, double dx, double dy, double cx, double cy, double r) {
    const double ox = px - cx;
    const double oy = py - cy;
    const double b = ox * dx + oy * dy;
    const double c = ox * ox + oy * oy - r * r;
    const double disc = b * b - c;
    if (disc < 0.0) return kInf;
    const double s = std::sqrt(disc);
    const double t1 = -b + s;
    if (t1 < 0.0) return kInf;
    return std::max(-b - s, 0.0);
}

double rayWalls(const Arena& a, double px, double py, double dx, double dy) {
    double t = kInf;
    if (dx > 0.0) t = std::min(t, (a.width - px) / dx);
    if (dx < 0.0) t = std::min(t, (0.0 - px) / dx);
    if (dy > 0.0) t = std::min(t, (a.height - py) / dy);
    if (dy < 0.0) t = std::min(t, (0.0 - py) / dy);
    return std::max(t, 0.0);
}

}  // namespace

LosHit raycastLineOfSight(const World& world, std::size_t robot) {
    const auto& self = world.robots.at(robot).pose;
    const double dx = std::cos(self.theta);
    const double dy = std::sin(self.theta);
    double best = kInf;
    for (std::size_t j = 0; j < world.robots.size(); ++j) {
        if (j == robot) continue;
        const auto& o = world.robots[j];
        best = std::min(best, rayDisc(self.x, self.y, dx, dy, o.pose.x, o.pose.y, o.bodyRadius));
    }
    return best <= rayWalls(world.arena, self.x, self.y, dx, dy) ? LosHit::Robot : LosHit::Wall;
}

std::vector<Neighbor> neighborsWithin(const World& world, std::size_t robot, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("neighbor radius must be positive");
    const auto& self = world.robots.at(robot).pose;
    std::vector<Neighbor> out;
    for (std::size_t j = 0; j < world.robots.size(); ++j) {
        if (j == robot) continue;
        const auto& o = world.robots[j].pose;
        const double range = std::hypot(o.x - self.x, o.y - self.y);
        if (range > radius) continue;
        const double bearing = normalizeAngle(std::atan2(o.y - self.y, o.x - self.x) - self.theta);
        out.push_back({j, range, bearing});
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.range != b.range ? a.range < b.range : a.index < b.index;
    });
    return out;
}

bool isIlluminated(const World& world, std::size_t robot) {
    if (!world.beacon) throw std::invalid_argument("no beacon configured");
    const auto& p = world.robots.at(robot).pose;
    const double ax = world.beacon->x;
    const double ay = world.beacon->y;
    const double sx = p.x - ax;
    const double sy = p.y - ay;
    const double len2 = sx * sx + sy * sy;
    for (std::size_t j = 0; j < world.robots.size(); ++j) {
        if (j == robot) continue;
        const auto& o = world.robots[j];
        double t = len2 > 0.0 ? ((o.pose.x - ax) * sx + (o.pose.y - ay) * sy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double d = std::hypot(ax + t * sx - o.pose.x, ay + t * sy - o.pose.y);
        if (d < o.bodyRadius) return false;
    }
    return true;
}

}  // namespace smforge::sim
