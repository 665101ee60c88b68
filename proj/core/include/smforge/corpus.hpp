#pragma once

#include <string_view>

/// Controller models shipped with the library (models/*.rcm).
namespace smforge::corpus {

inline constexpr std::string_view kAggregationMachine = "AggregationFSM";
inline constexpr std::string_view kTaxisMachine = "SwarmTaxisFSM";

std::string_view aggregationSource();
std::string_view taxisSource();

}  // namespace smforge::corpus
