#pragma once

#include "smforge/sim/kinematics.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace smforge::sim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned arena [0, width] x [0, height] with solid walls.
struct Arena {
    double width = 250.0;
    double height = 250.0;
};

struct World {
    Arena arena;
    std::vector<RobotBody> robots;
    std::optional<Point> beacon;
    double physicsDt = 0.01;
    double controlDt = 0.1;
    double clockS = 0.0;

    /// Physics substeps per control cycle; throws std::invalid_argument
    /// unless controlDt is a positive integer multiple of physicsDt.
    std::size_t substeps() const;
};

/// Separates overlapping discs by equal half-pushes along their center line
/// (at most 8 passes, robot index order) and clamps centers inside the
/// arena inset by the body radius.
void resolveCollisions(World& world);

/// One physics substep: integrate every pose, then resolve collisions.
void physicsStep(World& world);

}  // namespace smforge::sim
