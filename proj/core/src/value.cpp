#include "smforge/value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace smforge {

std::string_view typeName(TypeKind t) {
    switch (t) {
        case TypeKind::Boolean: return "boolean";
        case TypeKind::Int: return "int";
        case TypeKind::Real: return "real";
        case TypeKind::Vector2d: return "vector2d";
    }
    return "?";
}

std::optional<TypeKind> typeFromName(std::string_view name) {
    if (name == "boolean") return TypeKind::Boolean;
    if (name == "int") return TypeKind::Int;
    if (name == "real") return TypeKind::Real;
    if (name == "vector2d") return TypeKind::Vector2d;
    return std::nullopt;
}

TypeKind typeOf(const Value& v) {
    return static_cast<TypeKind>(v.index());
}

Value defaultValue(TypeKind t) {
    switch (t) {
        case TypeKind::Boolean: return false;
        case TypeKind::Int: return std::int64_t{0};
        case TypeKind::Real: return 0.0;
        case TypeKind::Vector2d: return Vec2{};
    }
    return false;
}

std::string formatReal(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite real has no literal form");
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), ptr);
    auto e = s.find('e');
    if (s.find('.') == std::string::npos) {
        if (e == std::string::npos)
            s += ".0";
        else
            s.insert(e, ".0");
    }
    return s;
}

std::string formatLiteral(const Value& v) {
    switch (typeOf(v)) {
        case TypeKind::Boolean: return std::get<bool>(v) ? "true" : "false";
        case TypeKind::Int: return std::to_string(std::get<std::int64_t>(v));
        case TypeKind::Real: return formatReal(std::get<double>(v));
        case TypeKind::Vector2d: {
            const auto& p = std::get<Vec2>(v);
            return "(" + formatReal(p.x) + ", " + formatReal(p.y) + ")";
        }
    }
    return {};
}

}  // namespace smforge
