#include "solsem/harness.hpp"

#include <json.hpp>

namespace solsem {

namespace {

using json = nlohmann::ordered_json;

/// Integers that fit 64 bits become JSON numbers, larger ones hex strings.
json number(const ByteAddr& v) {
    if (v <= ByteAddr{std::numeric_limits<std::uint64_t>::max()}) return static_cast<std::uint64_t>(v);
    return hex_number(v);
}
json number(const Word& v) { return number(ByteAddr{v}); }

json write_json(const TraceWrite& w) {
    return json{{"space", w.space == Location::Storage ? "storage" : "memory"},
                {"at", hex_number(w.at)},
                {"bytes", to_hex(w.bytes)}};
}

json event_json(const TraceEvent& ev) {
    json j;
    j["seq"] = ev.seq;
    j["rule"] = ev.rule;
    j["addr"] = hex_address(ev.addr);
    j["fn"] = ev.fn;
    json writes = json::array();
    for (const auto& w : ev.writes) writes.push_back(write_json(w));
    j["writes"] = std::move(writes);
    if (ev.call) {
        j["call"] = json{{"kind", ev.call->kind},
                         {"from", hex_address(ev.call->from)},
                         {"to", hex_address(ev.call->to)},
                         {"fn", ev.call->fn},
                         {"value", number(ev.call->value)},
                         {"gas", number(ev.call->gas)}};
    }
    if (ev.value) j["value"] = number(*ev.value);
    j["omega"] = ev.omega;
    j["tx"] = ev.tx;
    j["premises"] = ev.premises;
    return j;
}

json finding_json(const ReentrancyFinding& f) {
    json path = json::array();
    for (const auto& [a, fn] : f.path) path.push_back(json{{"addr", hex_address(a)}, {"fn", fn}});
    json writes = json::array();
    for (const auto& w : f.writes) writes.push_back(write_json(w));
    return json{{"victim", hex_address(f.victim)}, {"contract", f.contract},       {"fn", f.fn},
                {"outerSeq", f.outer_seq},         {"reentrantSeq", f.reentrant_seq}, {"path", std::move(path)},
                {"writes", std::move(writes)}};
}

}  // namespace

std::string trace_event_json(const TraceEvent& ev) { return event_json(ev).dump(); }

std::string trace_jsonl(const std::vector<TraceEvent>& trace) {
    std::string out;
    for (const auto& ev : trace) out += event_json(ev).dump() + "\n";
    return out;
}

std::string layout_json(const LayoutReport& r, int indent) {
    json vars = json::array();
    for (const auto& v : r.vars) {
        vars.push_back(json{{"name", v.name},
                            {"type", v.type},
                            {"byteAddr", number(v.byte_addr)},
                            {"slot", number(v.slot)},
                            {"offset", v.offset},
                            {"size", v.size},
                            {"value", v.value}});
    }
    json regions = json::array();
    for (const auto& g : r.regions) {
        regions.push_back(json{{"kind", g.kind},
                               {"base", g.base},
                               {"baseSlot", number(g.base_slot)},
                               {"key", g.key},
                               {"slot", hex_number(g.slot)},
                               {"type", g.type},
                               {"value", g.value}});
    }
    json j{{"contract", r.contract},
           {"address", hex_address(r.address)},
           {"lambda", number(r.lambda)},
           {"vars", std::move(vars)},
           {"hashedRegions", std::move(regions)}};
    return j.dump(indent);
}

std::string findings_json(const std::vector<ReentrancyFinding>& f, int indent) {
    json arr = json::array();
    for (const auto& x : f) arr.push_back(finding_json(x));
    return arr.dump(indent);
}

std::string outcome_json(const ScenarioOutcome& o, const std::vector<ReentrancyFinding>* findings, int indent) {
    json actions = json::array();
    for (const auto& a : o.actions) {
        json j{{"line", a.line}, {"action", a.text}, {"ok", a.result.ok}};
        if (a.result.error) j["error"] = std::string(to_string(*a.result.error));
        if (!a.result.message.empty()) j["message"] = a.result.message;
        if (a.result.address != 0) j["address"] = hex_address(a.result.address);
        if (a.result.ret && a.result.ret_type) j["return"] = render_value(*a.result.ret, *a.result.ret_type);
        json warnings = json::array();
        for (const auto& w : a.result.warnings) warnings.push_back(w.message);
        if (!warnings.empty()) j["warnings"] = std::move(warnings);
        actions.push_back(std::move(j));
    }
    json asserts = json::array();
    for (const auto& a : o.asserts) {
        json j{{"line", a.line}, {"assert", a.text}, {"passed", a.passed}, {"actual", a.actual}, {"expected", a.expected}};
        if (!a.message.empty()) j["message"] = a.message;
        asserts.push_back(std::move(j));
    }
    json j{{"ok", o.all_passed() && (!findings || findings->empty())},
           {"halted", o.halted},
           {"actions", std::move(actions)},
           {"asserts", std::move(asserts)}};
    if (o.halted) {
        j["haltLine"] = o.halt_line;
        if (o.error) j["error"] = std::string(to_string(*o.error));
        j["message"] = o.message;
    }
    if (findings) {
        json arr = json::array();
        for (const auto& x : *findings) arr.push_back(finding_json(x));
        j["findings"] = std::move(arr);
    }
    return j.dump(indent);
}

}  // namespace solsem
