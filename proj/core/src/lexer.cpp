#include "smforge/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace smforge {

namespace {

constexpr std::array kKeywords = {
    "interface", "var",     "event",    "op",      "machine", "requires", "clock",    "initial",
    "final",     "state",   "entry",    "during",  "exit",    "transition", "on",     "operation",
    "pre",       "post",    "module",   "platform", "controller", "boolean", "int",   "real",
    "vector2d",  "true",    "false",    "not",     "and",     "or",       "since",
};

constexpr std::array kTwoCharPuncts = {"->", ":=", "==", "!=", "<=", ">="};
constexpr std::string_view kOneCharPuncts = "{}()[],;:=/#+-*<>?";

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

    LexResult run() {
        LexResult out;
        while (true) {
            skipTrivia();
            if (pos_ >= src_.size()) break;
            scanToken(out);
        }
        Token eof;
        eof.kind = TokenKind::EndOfInput;
        eof.span = spanFrom(pos_, line_, col_);
        out.tokens.push_back(std::move(eof));
        return out;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skipTrivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    SourceSpan spanFrom(std::size_t begin, std::uint32_t line, std::uint32_t col) const {
        SourceSpan s;
        s.file = std::string(file_);
        s.line = line;
        s.col = col;
        s.endLine = line_;
        s.endCol = col_;
        s.begin = static_cast<std::uint32_t>(begin);
        s.end = static_cast<std::uint32_t>(pos_);
        return s;
    }

    void push(LexResult& out, TokenKind kind, std::size_t begin, std::uint32_t line, std::uint32_t col) {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(begin, pos_ - begin));
        t.span = spanFrom(begin, line, col);
        out.tokens.push_back(std::move(t));
    }

    void error(LexResult& out, std::size_t begin, std::uint32_t line, std::uint32_t col, std::string message) {
        out.diagnostics.push_back({"P01", Severity::Error, spanFrom(begin, line, col), std::move(message)});
    }

    void scanToken(LexResult& out) {
        const std::size_t begin = pos_;
        const auto line = line_;
        const auto col = col_;
        const char c = src_[pos_];

        if (isIdentStart(c)) {
            while (pos_ < src_.size() && isIdentChar(src_[pos_])) advance();
            auto word = src_.substr(begin, pos_ - begin);
            push(out, isKeyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, line, col);
            return;
        }
        if (isDigit(c)) {
            scanNumber(out, begin, line, col);
            return;
        }
        if (pos_ + 1 < src_.size()) {
            auto two = src_.substr(pos_, 2);
            if (std::find(kTwoCharPuncts.begin(), kTwoCharPuncts.end(), two) != kTwoCharPuncts.end()) {
                advance();
                advance();
                push(out, TokenKind::Punct, begin, line, col);
                return;
            }
        }
        if (kOneCharPuncts.find(c) != std::string_view::npos) {
            advance();
            push(out, TokenKind::Punct, begin, line, col);
            return;
        }

        // One diagnostic per bad code point; continuation bytes are consumed with it.
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
        auto bad = src_.substr(begin, pos_ - begin);
        error(out, begin, line, col, "unexpected character '" + std::string(bad) + "'");
    }

    void scanNumber(LexResult& out, std::size_t begin, std::uint32_t line, std::uint32_t col) {
        while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
        bool real = false;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            if (pos_ >= src_.size() || !isDigit(src_[pos_])) {
                error(out, begin, line, col, "real literal needs digits after '.'");
                return;
            }
            while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
            real = true;
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t save = pos_;
                auto saveLine = line_, saveCol = col_;
                advance();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
                if (pos_ < src_.size() && isDigit(src_[pos_])) {
                    while (pos_ < src_.size() && isDigit(src_[pos_])) advance();
                } else {
                    pos_ = save;
                    line_ = saveLine;
                    col_ = saveCol;
                }
            }
        }
        if (!real) {
            auto digits = src_.substr(begin, pos_ - begin);
            // 9223372036854775807
            if (digits.size() > 19 || (digits.size() == 19 && digits > "9223372036854775807")) {
                error(out, begin, line, col, "integer literal out of range");
                return;
            }
        }
        push(out, real ? TokenKind::Real : TokenKind::Integer, begin, line, col);
    }

    std::string_view src_;
    std::string_view file_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

}  // namespace

bool isKeyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

LexResult tokenize(std::string_view source, std::string_view file) {
    return Lexer(source, file).run();
}

}  // namespace smforge
