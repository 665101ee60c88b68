#include "smforge/diagnostic.hpp"

#include <json.hpp>

#include <algorithm>
#include <tuple>

namespace smforge {

SourceSpan merge(const SourceSpan& first, const SourceSpan& last) {
    SourceSpan out = first;
    out.endLine = last.endLine;
    out.endCol = last.endCol;
    out.end = std::max(first.end, last.end);
    return out;
}

bool hasErrors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sortDiagnostics(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.file, a.span.begin, a.code) < std::tie(b.span.file, b.span.begin, b.code);
    });
}

static const char* severityName(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

std::string formatDiagnostic(const Diagnostic& d) {
    return d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": " + d.code +
           " " + severityName(d.severity) + ": " + d.message;
}

std::string formatDiagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        out += formatDiagnostic(d);
        out += '\n';
    }
    return out;
}

std::string diagnosticsToJson(const std::vector<Diagnostic>& diagnostics) {
    auto arr = nlohmann::json::array();
    for (const auto& d : diagnostics) {
        arr.push_back({{"code", d.code},
                       {"severity", severityName(d.severity)},
                       {"file", d.span.file},
                       {"line", d.span.line},
                       {"col", d.span.col},
                       {"endLine", d.span.endLine},
                       {"endCol", d.span.endCol},
                       {"message", d.message}});
    }
    return arr.dump();
}

}  // namespace smforge
