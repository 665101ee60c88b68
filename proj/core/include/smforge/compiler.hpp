#pragma once

#include "smforge/analyzer.hpp"
#include "smforge/compiled.hpp"

#include <stdexcept>
#include <string_view>

namespace smforge {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flattens one machine of a resolved model. Throws CompileError for an
/// unknown machine name or a name that the host machine cannot address.
CompiledMachine compile(const ResolvedModel& model, std::string_view machineName);

}  // namespace smforge
