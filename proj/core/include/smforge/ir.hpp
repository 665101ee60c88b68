#pragma once

/// @file ir.hpp
/// @brief On-disk form of compiled machines.
///
/// The document is canonical JSON (sorted keys, no whitespace, shortest
/// round-trip reals) followed by a `crc32` key computed over the canonical
/// body without that key.

#include "smforge/compiled.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smforge {

inline constexpr int kIrVersion = 1;
inline constexpr std::string_view kIrExtension = ".smir.json";

class IrError : public std::runtime_error {
public:
    enum class Kind { Malformed, VersionMismatch, ChecksumMismatch, InvariantViolation };

    IrError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string serializeIr(const CompiledMachine& machine);
std::string serializeIr(std::span<const CompiledMachine> machines);

/// Every machine of the document, each re-validated.
std::vector<CompiledMachine> loadIrDocument(std::string_view bytes);

/// The first machine of the document.
CompiledMachine loadIr(std::string_view bytes);

}  // namespace smforge
