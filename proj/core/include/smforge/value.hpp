#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace smforge {

enum class TypeKind { Boolean, Int, Real, Vector2d };

std::string_view typeName(TypeKind t);
std::optional<TypeKind> typeFromName(std::string_view name);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

/// Runtime value of the controller language. Alternative order matches TypeKind.
using Value = std::variant<bool, std::int64_t, double, Vec2>;

TypeKind typeOf(const Value& v);
Value defaultValue(TypeKind t);

/// Shortest round-trip decimal text for a real that always carries a '.'.
std::string formatReal(double v);

/// Source-language spelling of a literal value, e.g. `true`, `3`, `-0.7`, `(1.0, 2.0)`.
std::string formatLiteral(const Value& v);

}  // namespace smforge
