#include "smforge/trace_io.hpp"

#include <json.hpp>

#include <algorithm>

namespace smforge {

namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxScriptCycle = 10'000'000;

json valueJson(const Value& v) {
    switch (typeOf(v)) {
        case TypeKind::Boolean: return std::get<bool>(v);
        case TypeKind::Int: return std::get<std::int64_t>(v);
        case TypeKind::Real: return std::get<double>(v);
        case TypeKind::Vector2d: {
            const auto& p = std::get<Vec2>(v);
            return json::array({p.x, p.y});
        }
    }
    return nullptr;
}

}  // namespace

std::string traceRecordToJson(const TraceRecord& rec, std::optional<std::size_t> robot) {
    json j;
    j["cycle"] = rec.cycle;
    j["state_before"] = rec.stateBefore;
    j["events"] = rec.events;
    j["fired"] = rec.fired ? json(*rec.fired) : json(nullptr);
    j["state_after"] = rec.stateAfter;
    json ops = json::array();
    for (const auto& op : rec.ops) {
        json args = json::array();
        for (const auto& a : op.args) args.push_back(valueJson(a));
        ops.push_back({{"name", op.name}, {"args", std::move(args)}});
    }
    j["ops"] = std::move(ops);
    json watch = json::object();
    for (const auto& [name, v] : rec.watch) watch[name] = valueJson(v);
    j["watch"] = std::move(watch);
    if (rec.fault) j["fault"] = *rec.fault;
    if (!rec.warnings.empty()) j["warnings"] = rec.warnings;
    if (robot) j["robot"] = *robot;
    return j.dump();
}

std::string traceToNdjson(std::span<const TraceRecord> trace) {
    std::string out;
    for (const auto& rec : trace) {
        out += traceRecordToJson(rec);
        out += '\n';
    }
    return out;
}

EventScript parseEventScript(std::string_view ndjson) {
    EventScript script;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos < ndjson.size()) {
        auto end = ndjson.find('\n', pos);
        if (end == std::string_view::npos) end = ndjson.size();
        const auto line = ndjson.substr(pos, end - pos);
        pos = end + 1;
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        auto fail = [&](const std::string& what) {
            throw FormatError("event script line " + std::to_string(lineNo) + ": " + what);
        };
        json j = json::parse(line.begin(), line.end(), nullptr, false);
        if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
        if (!j.contains("cycle") || !j["cycle"].is_number_unsigned()) fail("'cycle' must be a non-negative integer");
        if (!j.contains("events") || !j["events"].is_array()) fail("'events' must be an array");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "cycle" && it.key() != "events") fail("unknown key '" + it.key() + "'");

        const auto cycle = j["cycle"].get<std::size_t>();
        if (cycle > kMaxScriptCycle) fail("cycle exceeds " + std::to_string(kMaxScriptCycle));
        if (cycle >= script.cycles.size()) script.cycles.resize(cycle + 1);
        auto& slot = script.cycles[cycle];
        for (const auto& e : j["events"]) {
            if (!e.is_string()) fail("event names must be strings");
            auto name = e.get<std::string>();
            if (std::find(slot.begin(), slot.end(), name) == slot.end()) slot.push_back(std::move(name));
        }
    }
    return script;
}

}  // namespace smforge
