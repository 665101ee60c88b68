#pragma once

// Reference interpreter that evaluates a resolved model's syntax tree
// directly, without the compiler or the instruction set. Used as the
// independent oracle for the compiled runtime.

#include "smforge/analyzer.hpp"
#include "smforge/runtime.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace smforge::testing {

struct WalkerConfig {
    double timeUnit = 1.0;
    std::size_t stepBudget = 10000;
    std::vector<std::string> watch;
};

/// Runs `machine` against `script` with every external operation bound as a
/// no-op, following the same cycle rules as the runtime.
std::vector<TraceRecord> walkMachine(const ResolvedModel& model, std::string_view machine, const EventScript& script,
                                     std::uint64_t maxCycles, const WalkerConfig& config = {});

}  // namespace smforge::testing
