#pragma once

#include "smforge/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace smforge {

enum class TokenKind {
    Identifier,
    Integer,
    Real,
    Keyword,
    Punct,
    EndOfInput,
};

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;
    SourceSpan span;
};

struct LexResult {
    std::vector<Token> tokens;  // always terminated by EndOfInput
    std::vector<Diagnostic> diagnostics;
};

/// Splits source text into tokens. `//` starts a line comment. Every bad
/// character produces one P01 diagnostic; lexing continues after it.
LexResult tokenize(std::string_view source, std::string_view file = "<input>");

bool isKeyword(std::string_view word);

}  // namespace smforge
