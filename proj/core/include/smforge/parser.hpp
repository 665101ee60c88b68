#pragma once

#include "smforge/ast.hpp"
#include "smforge/diagnostic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smforge {

struct ParseResult {
    std::optional<ast::ModelUnit> unit;  // set iff diagnostics is empty
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return unit.has_value(); }
};

/// Parses controller-language source. On failure no partial tree is returned.
ParseResult parse(std::string_view source, std::string_view file = "<input>");

/// Canonical source text; parse(render(u)) is structurally equal to u.
std::string render(const ast::ModelUnit& unit);
std::string renderExpr(const ast::Expr& expr);

}  // namespace smforge
