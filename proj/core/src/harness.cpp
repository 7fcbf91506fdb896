#include "solsem/harness.hpp"

#include "solsem/layout.hpp"
#include "solsem/parser.hpp"

#include <cctype>
#include <regex>
#include <sstream>

namespace solsem {

namespace {

Error scenario_error(std::size_t line, const std::string& msg) {
    Span s;
    s.line = static_cast<std::uint32_t>(line);
    s.col = 1;
    return Error(ErrorKind::SyntaxError, "scenario line " + std::to_string(line) + ": " + msg, s);
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

/// Cursor over one scenario line.
struct LineReader {
    std::string s;
    std::size_t pos = 0;
    std::size_t line;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    std::string ident() {
        skip_ws();
        const std::size_t b = pos;
        if (pos < s.size() && ident_start(s[pos]))
            while (pos < s.size() && ident_char(s[pos])) ++pos;
        if (b == pos) throw scenario_error(line, "expected a name at column " + std::to_string(pos + 1));
        return s.substr(b, pos - b);
    }
    std::string word() {
        skip_ws();
        const std::size_t b = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return s.substr(b, pos - b);
    }
    /// Text inside a balanced parenthesis group starting at the cursor.
    std::string group() {
        skip_ws();
        if (pos >= s.size() || s[pos] != '(') throw scenario_error(line, "expected '('");
        int depth = 0;
        bool quoted = false;
        const std::size_t b = pos + 1;
        for (; pos < s.size(); ++pos) {
            const char c = s[pos];
            if (c == '"') quoted = !quoted;
            if (quoted) continue;
            if (c == '(' || c == '[') ++depth;
            if (c == ')' || c == ']') {
                if (--depth == 0) {
                    ++pos;
                    return s.substr(b, pos - 1 - b);
                }
            }
        }
        throw scenario_error(line, "unbalanced parentheses");
    }
};

std::vector<std::string> split_args(const std::string& inner, std::size_t line) {
    std::vector<std::string> out;
    if (trim(inner).empty()) return out;
    int depth = 0;
    bool quoted = false;
    std::string cur;
    for (char c : inner) {
        if (c == '"') quoted = !quoted;
        if (!quoted) {
            if (c == '(' || c == '[') ++depth;
            if (c == ')' || c == ']') --depth;
            if (c == ',' && depth == 0) {
                out.push_back(trim(cur));
                cur.clear();
                continue;
            }
        }
        cur += c;
    }
    out.push_back(trim(cur));
    for (const auto& a : out)
        if (a.empty()) throw scenario_error(line, "empty argument");
    return out;
}

void parse_clauses(LineReader& r, ScenarioAction& a) {
    while (!r.done()) {
        const std::string kw = r.word();
        if (kw == "from") {
            a.from = r.word();
            if (a.from.empty()) throw scenario_error(r.line, "missing account after 'from'");
        } else if (kw == "value") {
            a.value = r.word();
        } else if (kw == "gas") {
            a.gas = r.word();
        } else if (kw == "expect") {
            const std::string what = r.word();
            if (what != "abort") throw scenario_error(r.line, "expected 'expect abort'");
            a.expect_abort = true;
        } else {
            throw scenario_error(r.line, "unexpected '" + kw + "'");
        }
    }
}

Word parse_amount(const std::string& text, std::size_t line) {
    try {
        const BigInt v = parse_integer(text);
        if (v < 0 || v > BigInt(~Word{0})) throw scenario_error(line, "amount out of range: " + text);
        return Word(v);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw scenario_error(line, "bad amount '" + text + "'");
    }
}

/// Last top-level " == " separator in an assert line.
std::size_t find_equals(const std::string& s) {
    int depth = 0;
    bool quoted = false;
    std::size_t found = std::string::npos;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const char c = s[i];
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth == 0 && c == '=' && s[i + 1] == '=') found = i;
    }
    return found;
}

const std::regex& reserved_words() {
    static const std::regex re(
        "^(u?int[0-9]*|bool|address|string|true|false|msg|this|sender|value|length|balance|push|call|gas|mapping|"
        "memory|storage)$");
    return re;
}

}  // namespace

Scenario Scenario::parse(std::string_view text) {
    Scenario sc;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        LineReader r{line, 0, lineno};
        ScenarioAction a;
        a.line = lineno;
        a.text = line;
        const std::string verb = r.word();
        if (verb == "deploy") {
            a.kind = ScenarioAction::Kind::Deploy;
            a.handle = r.ident();
            a.contract = r.ident();
            if (r.peek('(')) a.args = split_args(r.group(), lineno);
            parse_clauses(r, a);
        } else if (verb == "tx") {
            a.kind = ScenarioAction::Kind::Tx;
            a.handle = r.ident();
            if (r.peek('.')) {
                ++r.pos;
                if (!r.peek('(')) a.fn = r.ident();
            }
            if (a.fn == "fallback") a.fn.clear();
            a.args = split_args(r.group(), lineno);
            parse_clauses(r, a);
        } else if (verb == "assert") {
            a.kind = ScenarioAction::Kind::Assert;
            const std::string rest = line.substr(r.pos);
            const std::size_t eq = find_equals(rest);
            if (eq == std::string::npos) throw scenario_error(lineno, "assert needs '<handle>.<expr> == <value>'");
            const std::string lhs = trim(rest.substr(0, eq));
            a.expected = trim(rest.substr(eq + 2));
            const std::size_t dot = lhs.find('.');
            if (dot == std::string::npos) throw scenario_error(lineno, "assert needs '<handle>.<expr>'");
            a.handle = trim(lhs.substr(0, dot));
            a.expr = trim(lhs.substr(dot + 1));
            if (a.handle.empty() || a.expr.empty() || a.expected.empty())
                throw scenario_error(lineno, "assert needs '<handle>.<expr> == <value>'");
        } else if (verb == "fund") {
            a.kind = ScenarioAction::Kind::Fund;
            a.handle = r.word();
            a.value = r.word();
            if (a.handle.empty() || a.value.empty() || !r.done())
                throw scenario_error(lineno, "fund needs '<account> <amount>'");
            parse_amount(a.value, lineno);
        } else {
            throw scenario_error(lineno, "unknown action '" + verb + "'");
        }
        if (a.kind == ScenarioAction::Kind::Deploy || a.kind == ScenarioAction::Kind::Tx) {
            parse_amount(a.value, lineno);
            parse_amount(a.gas, lineno);
        }
        sc.actions.push_back(std::move(a));
    }
    return sc;
}

bool ScenarioOutcome::all_passed() const {
    if (halted) return false;
    for (const auto& a : asserts)
        if (!a.passed) return false;
    return true;
}

Address account_address(std::size_t n) {
    static const Word base = Word(parse_integer("0xacc0000000000000000000000000000000000000"));
    return base + n;
}

Harness::Harness(std::shared_ptr<const Program> program, Options options) : interp_(std::move(program), options) {}

Address Harness::resolve_address(const std::string& name) {
    if (name.rfind("0x", 0) == 0 || name.rfind("0X", 0) == 0) {
        const BigInt v = parse_integer(name);
        if (v < 0 || v >= (BigInt(1) << 160)) throw Error(ErrorKind::RangeError, "address out of range: " + name);
        return Word(v);
    }
    if (auto it = handles_.find(name); it != handles_.end()) return it->second;
    if (auto it = accounts_.find(name); it != accounts_.end()) return it->second;
    if (name.empty() || !ident_start(name[0]))
        throw Error(ErrorKind::SyntaxError, "'" + name + "' is not an account name or address");
    const Address a = account_address(accounts_.size() + 1);
    accounts_.emplace(name, a);
    return a;
}

/// Replaces handle and account names in an expression with address
/// literals. Names of members, keywords and (when `scope` is given) the
/// scope contract's own identifiers are left alone.
std::string Harness::substitute(const std::string& text, const ContractInfo* scope) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '"') {
            const std::size_t e = text.find('"', i + 1);
            const std::size_t end = e == std::string::npos ? text.size() : e + 1;
            out += text.substr(i, end - i);
            i = end;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < text.size() && ident_char(text[i])) out += text[i++];
            continue;
        }
        if (!ident_start(c)) {
            out += c;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && ident_char(text[j])) ++j;
        const std::string name = text.substr(i, j - i);
        std::size_t k = out.size();
        while (k > 0 && std::isspace(static_cast<unsigned char>(out[k - 1]))) --k;
        const bool member = k > 0 && out[k - 1] == '.';
        std::size_t n = j;
        while (n < text.size() && std::isspace(static_cast<unsigned char>(text[n]))) ++n;
        const bool callee = n < text.size() && text[n] == '(';
        const bool keep = member || callee || std::regex_match(name, reserved_words()) ||
                          (scope && (scope->state_var(name) || scope->function(name))) ||
                          interp_.program().contract(name);
        if (keep) out += name;
        else out += "address(" + hex_address(resolve_address(name)) + ")";
        i = j;
    }
    return out;
}

TxResult Harness::run_action(const ScenarioAction& a) {
    ParseOptions po;
    po.hex_literals = true;
    const Address from = resolve_address(a.from.empty() ? std::string(kDefaultSender) : a.from);
    const Word value = parse_amount(a.value, a.line);
    const Word gas = parse_amount(a.gas, a.line);
    std::vector<ast::ExprPtr> args;
    for (const auto& s : a.args) args.push_back(parse_expression(substitute(s, nullptr), po));
    if (a.kind == ScenarioAction::Kind::Deploy) {
        if (handles_.count(a.handle)) throw scenario_error(a.line, "handle '" + a.handle + "' is already deployed");
        TxResult r = interp_.deploy(a.contract, args, from, value, gas);
        if (r.ok) handles_[a.handle] = r.address;
        return r;
    }
    auto it = handles_.find(a.handle);
    if (it == handles_.end()) throw scenario_error(a.line, "unknown handle '" + a.handle + "'");
    TxRequest tx;
    tx.from = from;
    tx.to = it->second;
    tx.fn = a.fn;
    tx.args = std::move(args);
    tx.value = value;
    tx.gas = gas;
    return interp_.transact(tx);
}

AssertionResult Harness::run_assert(const ScenarioAction& a) {
    AssertionResult res;
    res.line = a.line;
    res.text = a.text;
    res.expected = a.expected;
    ParseOptions po;
    po.hex_literals = true;
    try {
        auto hit = handles_.find(a.handle);
        if (hit == handles_.end()) {
            // plain account: only its balance is observable
            if (a.expr != "balance") throw Error(ErrorKind::UnknownIdentifier, "unknown handle '" + a.handle + "'");
            const Address acc = resolve_address(a.handle);
            res.actual = decimal(interp_.chain().balance_of(acc));
            const BigInt want = parse_integer(a.expected);
            res.expected = want.str();
            res.passed = res.actual == res.expected;
            return res;
        }
        const Address at = hit->second;
        const Instance* inst = interp_.chain().find(at);
        const ContractInfo* scope = inst ? interp_.program().contract(inst->contract) : nullptr;
        const ast::ExprPtr e = parse_expression(substitute(a.expr, scope), po);
        auto [v, t] = interp_.evaluate(at, *e);
        res.actual = render_value(v, *t);
        const ast::ExprPtr want = parse_expression(substitute(a.expected, nullptr), po);
        res.expected = render_value(interp_.literal_value(at, *want, t), *t);
        res.passed = res.actual == res.expected;
    } catch (const Error& err) {
        res.passed = false;
        res.message = err.what();
    }
    return res;
}

ScenarioOutcome Harness::run(const Scenario& s) {
    ScenarioOutcome out;
    for (const auto& a : s.actions) {
        if (a.kind == ScenarioAction::Kind::Assert) {
            out.asserts.push_back(run_assert(a));
            continue;
        }
        if (a.kind == ScenarioAction::Kind::Fund) {
            interp_.fund(resolve_address(a.handle), parse_amount(a.value, a.line));
            continue;
        }
        ActionOutcome ao;
        ao.line = a.line;
        ao.text = a.text;
        try {
            ao.result = run_action(a);
        } catch (const Error& err) {
            ao.result.ok = false;
            ao.result.error = err.kind();
            ao.result.message = err.what();
        }
        const bool ok = ao.result.ok;
        out.actions.push_back(ao);
        if (ok == a.expect_abort) {
            out.halted = true;
            out.halt_line = a.line;
            out.error = ok ? std::optional<ErrorKind>{} : ao.result.error;
            out.message = ok ? "expected the action to abort, but it succeeded" : ao.result.message;
            break;
        }
    }
    return out;
}

ScenarioOutcome Harness::run_main() {
    Scenario s;
    ScenarioAction d;
    d.kind = ScenarioAction::Kind::Deploy;
    d.handle = "main";
    d.contract = "Main";
    d.text = "deploy main Main()";
    ScenarioAction t;
    t.kind = ScenarioAction::Kind::Tx;
    t.handle = "main";
    t.fn = "main";
    t.text = "tx main.main()";
    s.actions = {d, t};
    return run(s);
}

std::vector<ReentrancyFinding> detect_reentrancy(const std::vector<TraceEvent>& trace, const Chain* chain) {
    struct Open {
        Address addr;
        std::string fn;
        std::uint64_t seq = 0;
        bool reentered = false;
        std::uint64_t reentrant_seq = 0;
        std::vector<std::pair<Address, std::string>> path;
        std::vector<TraceWrite> writes;
    };
    std::vector<Open> stack;
    std::vector<ReentrancyFinding> out;
    for (const auto& ev : trace) {
        if ((ev.rule == "TX" || ev.rule == "E-FUN1" || ev.rule == "E-FUN2") && ev.call) {
            const Address to = ev.call->to;
            for (std::size_t i = stack.size(); i-- > 0;) {
                if (stack[i].addr != to) continue;
                if (!stack[i].reentered) {
                    stack[i].reentered = true;
                    stack[i].reentrant_seq = ev.seq;
                    for (std::size_t j = i; j < stack.size(); ++j) stack[i].path.emplace_back(stack[j].addr, stack[j].fn);
                    stack[i].path.emplace_back(to, ev.call->fn);
                }
                break;
            }
            stack.push_back(Open{to, ev.call->fn, ev.seq, false, 0, {}, {}});
            continue;
        }
        if (ev.rule == "SKIP1" || ev.rule == "SKIP2") {
            if (stack.empty()) continue;
            Open top = std::move(stack.back());
            stack.pop_back();
            if (top.reentered && !top.writes.empty()) {
                ReentrancyFinding f;
                f.victim = top.addr;
                if (chain)
                    if (const Instance* inst = chain->find(top.addr)) f.contract = inst->contract;
                f.fn = top.fn;
                f.outer_seq = top.seq;
                f.reentrant_seq = top.reentrant_seq;
                f.path = std::move(top.path);
                f.writes = std::move(top.writes);
                out.push_back(std::move(f));
            }
            continue;
        }
        if (stack.empty()) continue;
        Open& top = stack.back();
        if (!top.reentered || top.addr != ev.addr) continue;
        for (const auto& w : ev.writes)
            if (w.space == Location::Storage) top.writes.push_back(w);
    }
    std::sort(out.begin(), out.end(),
              [](const ReentrancyFinding& a, const ReentrancyFinding& b) { return a.outer_seq < b.outer_seq; });
    return out;
}

LayoutReport dump_layout(Interpreter& interp, const Address& at) {
    const Instance* inst = interp.chain().find(at);
    if (!inst) throw Error(ErrorKind::UnknownAddress, "no contract instance at " + hex_address(at));
    LayoutReport r;
    r.contract = inst->contract;
    r.address = at;
    r.lambda = inst->config.storage.lambda;
    // reading a value snapshots and restores the chain, so `inst` is
    // looked up again afterwards
    const std::vector<std::string> order = inst->config.storage.order;
    for (const auto& name : order) {
        const Binding b = interp.chain().find(at)->config.storage.names.at(name);
        LayoutVar v;
        v.name = name;
        v.type = b.type->str();
        v.byte_addr = b.addr;
        v.slot = Word(b.addr / kSlotBytes);
        v.offset = static_cast<std::uint64_t>(b.addr % kSlotBytes);
        v.size = size_of(*b.type);
        v.value = render_value(interp.read_state_var(at, name), *b.type);
        r.vars.push_back(std::move(v));
    }
    inst = interp.chain().find(at);
    for (const auto& [slot, h] : inst->config.storage.hashed) {
        LayoutRegion g;
        g.kind = h.kind;
        g.base = h.base;
        g.base_slot = h.base_slot;
        g.key = h.key;
        g.slot = slot;
        g.type = h.type->str();
        const SemType& t = *h.type;
        if (t.kind() == TypeKind::String || t.kind() == TypeKind::Mapping || t.kind() == TypeKind::DynArray) {
            const Bytes raw = inst->config.storage.bytes.read(slot_to_addr(slot), kSlotBytes);
            g.value = decimal(from_be(raw.data(), raw.size()));
        } else {
            g.value = render_value(value_from_bytes(inst->config.storage.bytes.read(slot_to_addr(slot), size_of(t)), t), t);
        }
        r.regions.push_back(std::move(g));
    }
    return r;
}

}  // namespace solsem
