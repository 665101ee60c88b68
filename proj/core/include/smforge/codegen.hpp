#pragma once

/// @file codegen.hpp
/// @brief Class-style source text for a compiled machine.
///
/// Mapping: an interface becomes a class with an event enumeration, variable
/// attributes and overridable operation methods; a machine becomes a class
/// inheriting its interfaces, with a state enumeration, one Timer attribute
/// per clock and a `MakeTransition` method running one control cycle. The
/// output is golden-tested text and is never compiled.

#include "smforge/ast.hpp"
#include "smforge/compiled.hpp"

#include <span>
#include <string>
#include <vector>

namespace smforge {

inline constexpr std::string_view kGeneratedExtension = ".gen.txt";

struct GeneratedUnit {
    std::string name;  // file stem
    std::string text;
};

/// One unit per interface (in the given order), one for the machine, and a
/// `Timer` unit when the machine declares clocks.
std::vector<GeneratedUnit> emitUnits(const CompiledMachine& machine,
                                     std::span<const ast::InterfaceDecl* const> interfaces);

/// All units of a single-interface machine, concatenated in emitUnits order.
std::string emitSource(const CompiledMachine& machine, const ast::InterfaceDecl& iface);

}  // namespace smforge
