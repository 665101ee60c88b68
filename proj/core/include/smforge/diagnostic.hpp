#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace smforge {

/// Location of a construct in a source file. Lines and columns are 1-based,
/// `begin`/`end` are byte offsets with `end` exclusive.
struct SourceSpan {
    std::string file;
    std::uint32_t line = 0;
    std::uint32_t col = 0;
    std::uint32_t endLine = 0;
    std::uint32_t endCol = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    bool operator==(const SourceSpan&) const = default;
};

/// Joins two spans of the same file into one covering both.
SourceSpan merge(const SourceSpan& first, const SourceSpan& last);

enum class Severity { Error, Warning };

struct Diagnostic {
    std::string code;  // stable: P01..P03, E01..E11, W01..W03
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

bool hasErrors(const std::vector<Diagnostic>& diagnostics);

/// Orders diagnostics by (file, span start, code).
void sortDiagnostics(std::vector<Diagnostic>& diagnostics);

/// `FILE:LINE:COL: CODE severity: message`
std::string formatDiagnostic(const Diagnostic& d);
std::string formatDiagnostics(const std::vector<Diagnostic>& diagnostics);

/// JSON array with fields code, severity, file, line, col, endLine, endCol, message.
std::string diagnosticsToJson(const std::vector<Diagnostic>& diagnostics);

}  // namespace smforge
