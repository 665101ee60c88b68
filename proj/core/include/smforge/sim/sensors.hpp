#pragma once

#include "smforge/sim/world.hpp"

#include <vector>

namespace smforge::sim {

enum class LosHit { Robot, Wall };

/// Type of the first object hit by the unlimited forward ray from the
/// robot's center. A robot at the same range as a wall wins.
LosHit raycastLineOfSight(const World& world, std::size_t robot);

struct Neighbor {
    std::size_t index;
    double range;    // cm, center to center
    double bearing;  // rad relative to heading, (-pi, pi]
};

/// Other robots with center distance <= radius, sorted by (range, index).
std::vector<Neighbor> neighborsWithin(const World& world, std::size_t robot, double radius);

/// True iff the open segment from the beacon to the robot's center passes
/// no other robot's disc. Throws std::invalid_argument without a beacon.
bool isIlluminated(const World& world, std::size_t robot);

}  // namespace smforge::sim
