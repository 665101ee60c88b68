#include "smforge/ir.hpp"

#include <json.hpp>
#include <zlib.h>

#include <cstdio>

namespace smforge {

namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
    throw IrError(IrError::Kind::Malformed, "malformed IR: " + what);
}

bool hasOperand(OpCode op) {
    switch (op) {
        case OpCode::LoadVar:
        case OpCode::LoadParam:
        case OpCode::LoadClock:
        case OpCode::StoreVar:
        case OpCode::ResetClock:
        case OpCode::Jump:
        case OpCode::JumpIfFalse:
        case OpCode::JumpIfTrue:
        case OpCode::CallExt:
        case OpCode::CallDef: return true;
        default: return false;
    }
}

// --- encoding ------------------------------------------------------------------

json encodeValue(const Value& v) {
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

json encodeProgram(const std::optional<Program>& p) {
    if (!p) return nullptr;
    json out = json::array();
    for (const auto& in : p->code) {
        json operand = nullptr;
        if (in.op == OpCode::PushLit)
            operand = encodeValue(in.lit);
        else if (hasOperand(in.op))
            operand = in.arg;
        out.push_back(json::array({std::string(mnemonic(in.op)), std::move(operand)}));
    }
    return out;
}

json encodeOptionalIndex(const std::optional<std::size_t>& i) {
    return i ? json(*i) : json(nullptr);
}

json encodeParams(const OpSignature& sig) {
    json out = json::array();
    for (const auto& p : sig.params) out.push_back({{"name", p.name}, {"type", std::string(typeName(p.type))}});
    return out;
}

void encodeBody(json& out, const MachineBody& body) {
    json states = json::array();
    for (const auto& s : body.states)
        states.push_back({{"name", s.name},
                          {"entry", encodeProgram(s.entry)},
                          {"during", encodeProgram(s.during)},
                          {"exit", encodeProgram(s.exit)},
                          {"final", s.isFinal}});
    json transitions = json::array();
    for (const auto& t : body.transitions)
        transitions.push_back({{"src", t.source},
                               {"tgt", t.target},
                               {"event", encodeOptionalIndex(t.event)},
                               {"guard", encodeProgram(t.guard)},
                               {"action", encodeProgram(t.action)}});
    out["states"] = std::move(states);
    out["initial"] = body.initial;
    out["transitions"] = std::move(transitions);
}

json encodeMachine(const CompiledMachine& m) {
    json out;
    out["name"] = m.name;
    encodeBody(out, m.body);
    out["events"] = m.events;
    out["clocks"] = m.clocks;
    json vars = json::array();
    for (const auto& v : m.vars)
        vars.push_back({{"name", v.name}, {"type", std::string(typeName(v.type))}, {"init", encodeValue(v.init)}});
    out["vars"] = std::move(vars);
    json ext = json::array();
    for (const auto& op : m.externalOps)
        ext.push_back({{"name", op.sig.name},
                       {"params", encodeParams(op.sig)},
                       {"pre", encodeProgram(op.pre)},
                       {"post", encodeProgram(op.post)}});
    out["externalOps"] = std::move(ext);
    json def = json::array();
    for (const auto& op : m.definedOps) {
        json d{{"name", op.sig.name},
               {"params", encodeParams(op.sig)},
               {"pre", encodeProgram(op.pre)},
               {"post", encodeProgram(op.post)}};
        encodeBody(d, op.body);
        def.push_back(std::move(d));
    }
    out["definedOps"] = std::move(def);
    return out;
}

std::string crcHex(const std::string& body) {
    auto crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

// --- decoding ------------------------------------------------------------------

const json& field(const json& obj, const char* key) {
    if (!obj.is_object()) malformed(std::string("expected an object holding '") + key + "'");
    auto it = obj.find(key);
    if (it == obj.end()) malformed(std::string("missing key '") + key + "'");
    return *it;
}

std::string text(const json& obj, const char* key) {
    const auto& v = field(obj, key);
    if (!v.is_string()) malformed(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t index(const json& v, const char* what) {
    if (!v.is_number_unsigned()) malformed(std::string(what) + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::optional<std::size_t> optionalIndex(const json& v, const char* what) {
    if (v.is_null()) return std::nullopt;
    return index(v, what);
}

TypeKind typeField(const json& obj) {
    auto t = typeFromName(text(obj, "type"));
    if (!t) malformed("unknown type name");
    return *t;
}

double real(const json& v) {
    if (!v.is_number()) malformed("expected a number");
    return v.get<double>();
}

Value decodeLiteral(const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    if (v.is_array() && v.size() == 2) return Vec2{real(v[0]), real(v[1])};
    malformed("unrecognized literal " + v.dump());
}

Value decodeTyped(const json& v, TypeKind t) {
    switch (t) {
        case TypeKind::Boolean:
            if (v.is_boolean()) return v.get<bool>();
            break;
        case TypeKind::Int:
            if (v.is_number_integer()) return v.get<std::int64_t>();
            break;
        case TypeKind::Real:
            if (v.is_number()) return v.get<double>();
            break;
        case TypeKind::Vector2d:
            if (v.is_array() && v.size() == 2) return Vec2{real(v[0]), real(v[1])};
            break;
    }
    malformed("value " + v.dump() + " does not match type " + std::string(typeName(t)));
}

std::optional<Program> decodeProgram(const json& v) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_array()) malformed("program must be an array");
    Program p;
    for (const auto& pair : v) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) malformed("instruction must be [mnemonic, operand]");
        auto op = opcodeFromMnemonic(pair[0].get<std::string>());
        if (!op) malformed("unknown mnemonic '" + pair[0].get<std::string>() + "'");
        Instr in{*op, 0, false};
        if (*op == OpCode::PushLit)
            in.lit = decodeLiteral(pair[1]);
        else if (hasOperand(*op))
            in.arg = static_cast<std::int64_t>(index(pair[1], "operand"));
        else if (!pair[1].is_null())
            malformed("instruction '" + pair[0].get<std::string>() + "' takes no operand");
        p.code.push_back(std::move(in));
    }
    return p;
}

OpSignature decodeSignature(const json& obj) {
    OpSignature sig{text(obj, "name"), {}};
    const auto& params = field(obj, "params");
    if (!params.is_array()) malformed("params must be an array");
    for (const auto& p : params) sig.params.push_back({text(p, "name"), typeField(p)});
    return sig;
}

std::vector<std::string> names(const json& v) {
    if (!v.is_array()) malformed("expected an array of names");
    std::vector<std::string> out;
    for (const auto& n : v) {
        if (!n.is_string()) malformed("expected a name");
        out.push_back(n.get<std::string>());
    }
    return out;
}

MachineBody decodeBody(const json& obj) {
    MachineBody body;
    const auto& states = field(obj, "states");
    const auto& transitions = field(obj, "transitions");
    if (!states.is_array() || !transitions.is_array()) malformed("states/transitions must be arrays");
    for (const auto& s : states) {
        const auto& fin = field(s, "final");
        if (!fin.is_boolean()) malformed("'final' must be a boolean");
        body.states.push_back({text(s, "name"), decodeProgram(field(s, "entry")), decodeProgram(field(s, "during")),
                               decodeProgram(field(s, "exit")), fin.get<bool>()});
    }
    body.initial = index(field(obj, "initial"), "initial");
    for (const auto& t : transitions)
        body.transitions.push_back({index(field(t, "src"), "src"), index(field(t, "tgt"), "tgt"),
                                    optionalIndex(field(t, "event"), "event"), decodeProgram(field(t, "guard")),
                                    decodeProgram(field(t, "action"))});
    return body;
}

CompiledMachine decodeMachine(const json& obj) {
    CompiledMachine m;
    m.name = text(obj, "name");
    m.body = decodeBody(obj);
    m.events = names(field(obj, "events"));
    m.clocks = names(field(obj, "clocks"));
    for (const auto& v : field(obj, "vars")) {
        const auto type = typeField(v);
        m.vars.push_back({text(v, "name"), type, decodeTyped(field(v, "init"), type)});
    }
    for (const auto& op : field(obj, "externalOps"))
        m.externalOps.push_back({decodeSignature(op), decodeProgram(field(op, "pre")), decodeProgram(field(op, "post"))});
    for (const auto& op : field(obj, "definedOps"))
        m.definedOps.push_back(
            {decodeSignature(op), decodeProgram(field(op, "pre")), decodeProgram(field(op, "post")), decodeBody(op)});
    return m;
}

}  // namespace

std::string serializeIr(const CompiledMachine& machine) {
    return serializeIr(std::span<const CompiledMachine>(&machine, 1));
}

std::string serializeIr(std::span<const CompiledMachine> machines) {
    json doc;
    doc["version"] = kIrVersion;
    doc["machines"] = json::array();
    for (const auto& m : machines) doc["machines"].push_back(encodeMachine(m));
    auto body = doc.dump();
    const auto crc = crcHex(body);
    body.pop_back();
    body += ",\"crc32\":\"" + crc + "\"}\n";
    return body;
}

std::vector<CompiledMachine> loadIrDocument(std::string_view bytes) {
    json doc = json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) malformed("not a JSON object");

    const auto& version = field(doc, "version");
    if (!version.is_number_integer() || version.get<std::int64_t>() != kIrVersion)
        throw IrError(IrError::Kind::VersionMismatch,
                      "IR version mismatch: file has " + version.dump() + ", expected " + std::to_string(kIrVersion));

    const auto stored = text(doc, "crc32");
    doc.erase("crc32");
    const auto actual = crcHex(doc.dump());
    if (stored != actual)
        throw IrError(IrError::Kind::ChecksumMismatch, "IR checksum mismatch: stored " + stored + ", computed " + actual);

    const auto& list = field(doc, "machines");
    if (!list.is_array() || list.empty()) malformed("'machines' must be a non-empty array");
    std::vector<CompiledMachine> out;
    for (const auto& m : list) {
        auto machine = decodeMachine(m);
        try {
            machine.validate();
        } catch (const std::invalid_argument& e) {
            throw IrError(IrError::Kind::InvariantViolation, e.what());
        }
        out.push_back(std::move(machine));
    }
    return out;
}

CompiledMachine loadIr(std::string_view bytes) {
    return std::move(loadIrDocument(bytes).front());
}

}  // namespace smforge
