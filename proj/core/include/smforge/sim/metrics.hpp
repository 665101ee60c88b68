#pragma once

#include "smforge/sim/world.hpp"

namespace smforge::sim {

/// Size of the largest group of robots connected by center distances
/// <= threshold, divided by the robot count.
double clusterFraction(const World& world, double threshold);

struct TaxisMetrics {
    double centroidBeaconDistance = 0.0;  // cm
    double maxSpread = 0.0;               // cm, largest distance from the centroid
};

/// Throws std::invalid_argument without a beacon.
TaxisMetrics taxisMetrics(const World& world);

}  // namespace smforge::sim
