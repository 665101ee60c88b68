#pragma once

/// @file trace_io.hpp
/// @brief NDJSON forms of traces and event scripts.

#include "smforge/runtime.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smforge {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One compact JSON object with sorted keys, no trailing newline. Simulator
/// traces tag each record with the robot it belongs to.
std::string traceRecordToJson(const TraceRecord& rec, std::optional<std::size_t> robot = std::nullopt);

/// One line per record, each terminated by '\n'.
std::string traceToNdjson(std::span<const TraceRecord> trace);

/// Lines of `{"cycle": N, "events": [...]}`; blank lines are ignored, records
/// may come in any order and repeated cycles merge. Throws FormatError with
/// the offending line number.
EventScript parseEventScript(std::string_view ndjson);

}  // namespace smforge
