#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace smforge::sim {

/// Name recorded in metric headers so runs can be reproduced elsewhere.
inline constexpr std::string_view kRngName = "mt19937_64/seed_seq";

/// Independent generator for stream `stream` of `seed`. Stream 0 places
/// robots; stream 1 + i belongs to robot i.
std::mt19937_64 makeStream(std::uint64_t seed, std::uint64_t stream);

/// Uniform in [0, 1) from the top 53 bits of one draw.
double unitDouble(std::mt19937_64& gen);

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * unitDouble(gen);
}

}  // namespace smforge::sim
