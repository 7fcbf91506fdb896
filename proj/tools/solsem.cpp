// solsem command-line driver: run scenarios, dump storage layouts, check syntax.

#include "solsem/harness.hpp"
#include "solsem/parser.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace solsem;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

/// Several input files are concatenated into one source unit; this maps a
/// line of the combined text back to its file.
struct SourceSet {
    std::string text;
    std::vector<std::pair<std::uint32_t, std::string>> starts;  // first combined line, file

    void add(const std::string& path, const std::string& body) {
        const auto first = static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n') + 1);
        starts.emplace_back(first, path);
        text += body;
        if (!text.empty() && text.back() != '\n') text += '\n';
    }

    std::string where(const Span& s) const {
        if (s.line == 0 || starts.empty()) return starts.empty() ? "<input>" : starts.front().second;
        auto it = std::upper_bound(starts.begin(), starts.end(), s.line,
                                   [](std::uint32_t l, const auto& p) { return l < p.first; });
        if (it != starts.begin()) --it;
        return it->second + ":" + std::to_string(s.line - it->first + 1) + ":" + std::to_string(s.col);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void report(const std::string& where, const Error& e) {
    std::cerr << where << ": error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
}

void report_warnings(const SourceSet& src, const std::vector<Diagnostic>& ws) {
    for (const auto& w : ws) std::cerr << src.where(w.span) << ": warning: " << w.message << "\n";
}

struct Common {
    std::vector<std::string> inputs;
    bool modern_syntax = false;
    bool evm_hash_order = false;
    std::uint64_t max_steps = 0;
    std::size_t max_call_depth = 1024;
    bool json = false;
};

Options engine_options(const Common& c) {
    Options o;
    o.hash_order = c.evm_hash_order ? MapHashOrder::KeyThenBase : MapHashOrder::BaseThenKey;
    o.max_steps = c.max_steps;
    o.max_call_depth = c.max_call_depth;
    return o;
}

/// Parses and checks all `.sol` inputs. Returns nullptr after reporting.
std::shared_ptr<const Program> load_program(const Common& c, const std::vector<std::string>& sol, SourceSet& src) {
    for (const auto& p : sol) src.add(p, read_file(p));
    ParseOptions po;
    po.modern_syntax = c.modern_syntax;
    ParseResult pr = parse(src.text, po);
    for (const auto& d : pr.diagnostics) {
        if (d.severity == Diagnostic::Severity::Error) {
            report(src.where(d.span), Error(d.kind, d.message, d.span));
            return nullptr;
        }
    }
    try {
        auto prog = Program::build(std::move(pr.unit));
        report_warnings(src, prog->warnings());
        return prog;
    } catch (const Error& e) {
        report(src.where(e.span()), e);
        return nullptr;
    }
}

std::string contract_of(Interpreter& in, const Address& a) {
    const Instance* inst = in.chain().find(a);
    return inst ? inst->contract : "?";
}

void print_human(const ScenarioOutcome& o, const std::vector<ReentrancyFinding>* findings, Interpreter& in) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    for (const auto& a : o.actions) {
        std::ostringstream os;
        os << "line " << a.line << ": " << a.text << " -> ";
        if (a.result.ok) {
            os << "ok";
            if (a.result.address != 0) os << " at " << hex_address(a.result.address);
            if (a.result.ret && a.result.ret_type) os << " returned " << render_value(*a.result.ret, *a.result.ret_type);
        } else {
            os << "aborted (" << to_string(*a.result.error) << ": " << a.result.message << ")";
        }
        os << "\n";
        for (const auto& w : a.result.warnings) os << "  warning: " << w.message << "\n";
        lines.emplace_back(a.line, os.str());
    }
    for (const auto& a : o.asserts) {
        std::ostringstream os;
        os << "line " << a.line << ": " << a.text << " -> " << (a.passed ? "pass" : "FAIL");
        if (!a.passed) {
            if (!a.message.empty()) os << " (" << a.message << ")";
            else os << " (actual " << a.actual << ", expected " << a.expected << ")";
        }
        os << "\n";
        lines.emplace_back(a.line, os.str());
    }
    std::stable_sort(lines.begin(), lines.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& l : lines) std::cout << l.second;
    if (o.halted) std::cout << "halted at line " << o.halt_line << ": " << o.message << "\n";
    if (!findings) return;
    // one line per victim function, with its frames listed below
    std::map<std::pair<Address, std::string>, std::vector<const ReentrancyFinding*>> by_victim;
    for (const auto& f : *findings) by_victim[{f.victim, f.fn}].push_back(&f);
    if (by_victim.empty()) std::cout << "reentrancy: no findings\n";
    for (const auto& [key, list] : by_victim) {
        std::cout << "reentrancy: " << contract_of(in, key.first) << "." << key.second << " at "
                  << hex_address(key.first) << " is re-entered and writes storage afterwards (" << list.size()
                  << (list.size() == 1 ? " frame)" : " frames)") << "\n";
        for (const auto* f : list) {
            std::cout << "  outer #" << f->outer_seq << ", reentry #" << f->reentrant_seq << ", path";
            for (const auto& [a, fn] : f->path) std::cout << " " << contract_of(in, a) << "." << fn;
            std::cout << ", " << f->writes.size() << " storage write(s)\n";
        }
    }
}

int cmd_run(const Common& c, const std::string& scenario_path, bool detect, const std::string& trace_path) {
    std::vector<std::string> sol;
    std::string scn = scenario_path;
    for (const auto& in : c.inputs) {
        if (ends_with(in, ".scn")) {
            if (!scn.empty()) {
                std::cerr << "error: more than one scenario given\n";
                return kExitInvalid;
            }
            scn = in;
        } else {
            sol.push_back(in);
        }
    }
    SourceSet src;
    auto prog = load_program(c, sol, src);
    if (!prog) return kExitInvalid;

    Harness h(prog, engine_options(c));
    ScenarioOutcome out;
    if (!scn.empty()) {
        Scenario s;
        try {
            s = Scenario::parse(read_file(scn));
        } catch (const Error& e) {
            report(scn + ":" + std::to_string(e.span().line), e);
            return kExitInvalid;
        }
        out = h.run(s);
    } else if (prog->contract("Main")) {
        out = h.run_main();
    } else {
        std::cerr << "error: no scenario given and no contract named Main\n";
        return kExitInvalid;
    }

    std::vector<ReentrancyFinding> findings;
    if (detect) {
        findings = detect_reentrancy(h.interpreter().trace(), &h.interpreter().chain());
    }
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path, std::ios::binary);
        if (!tf) {
            std::cerr << "error: cannot write '" << trace_path << "'\n";
            return kExitInvalid;
        }
        tf << trace_jsonl(h.interpreter().trace());
    }
    if (c.json) std::cout << outcome_json(out, detect ? &findings : nullptr) << "\n";
    else print_human(out, detect ? &findings : nullptr, h.interpreter());

    if (out.halted && out.error && is_semantic(*out.error)) return kExitInvalid;
    if (!out.all_passed() || !findings.empty()) return kExitFailed;
    return kExitOk;
}

int cmd_layout(const Common& c, const std::string& contract, const std::vector<std::string>& txs) {
    SourceSet src;
    auto prog = load_program(c, c.inputs, src);
    if (!prog) return kExitInvalid;
    if (!prog->contract(contract)) {
        std::cerr << "error: no contract named '" << contract << "'\n";
        return kExitInvalid;
    }
    Harness h(prog, engine_options(c));
    const Address sender = h.resolve_address(std::string(Harness::kDefaultSender));
    TxResult d = h.interpreter().deploy(contract, {}, sender);
    if (!d.ok) {
        report(src.where(d.span), Error(*d.error, d.message, d.span));
        return is_semantic(*d.error) ? kExitInvalid : kExitFailed;
    }
    for (const auto& fn : txs) {
        TxRequest tx;
        tx.from = sender;
        tx.to = d.address;
        tx.fn = fn;
        TxResult r = h.interpreter().transact(tx);
        if (!r.ok) {
            report(src.where(r.span), Error(*r.error, r.message, r.span));
            return is_semantic(*r.error) ? kExitInvalid : kExitFailed;
        }
    }
    const LayoutReport rep = dump_layout(h.interpreter(), d.address);
    if (c.json) {
        std::cout << layout_json(rep) << "\n";
        return kExitOk;
    }
    std::cout << rep.contract << " at " << hex_address(rep.address) << ", lambda = " << rep.lambda << "\n";
    std::cout << "name\ttype\tbyte\tslot\toffset\tsize\tvalue\n";
    for (const auto& v : rep.vars)
        std::cout << v.name << "\t" << v.type << "\t" << v.byte_addr << "\t" << v.slot << "\t" << v.offset << "\t"
                  << v.size << "\t" << v.value << "\n";
    for (const auto& g : rep.regions)
        std::cout << g.kind << " " << g.base << "[" << g.key << "]\t" << g.type << "\tslot " << hex_number(g.slot)
                  << "\t" << g.value << "\n";
    return kExitOk;
}

int cmd_parse(const Common& c) {
    SourceSet src;
    for (const auto& p : c.inputs) src.add(p, read_file(p));
    ParseOptions po;
    po.modern_syntax = c.modern_syntax;
    ParseResult pr = parse(src.text, po);
    for (const auto& d : pr.diagnostics) {
        if (d.severity == Diagnostic::Severity::Error) {
            report(src.where(d.span), Error(d.kind, d.message, d.span));
            return kExitInvalid;
        }
    }
    std::cout << print(pr.unit);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpreter for a Solidity subset with byte-level storage semantics"};
    app.require_subcommand(1);

    Common common;
    if (const char* env = std::getenv("SOLSEM_MAX_STEPS")) {
        try {
            common.max_steps = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: SOLSEM_MAX_STEPS must be a number\n";
            return kExitInvalid;
        }
    }
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("inputs", common.inputs, "Source files (.sol) and scenario files (.scn)")->required();
        sub->add_flag("--modern-syntax", common.modern_syntax, "Accept constructor/fallback keywords");
        sub->add_flag("--evm-hash-order", common.evm_hash_order, "Hash mapping keys before the base slot");
        sub->add_option("--max-steps", common.max_steps, "Statement budget per transaction (0 = unlimited)");
        sub->add_option("--max-call-depth", common.max_call_depth, "Maximum nesting of call frames");
        sub->add_flag("--json", common.json, "Machine-readable output");
    };

    std::string scenario, trace;
    bool detect = false;
    CLI::App* run = app.add_subcommand("run", "Deploy and run a scenario (or Main.main())");
    add_common(run);
    run->add_option("--scenario", scenario, "Scenario file");
    run->add_flag("--detect-reentrancy", detect, "Report reentrant frames that write storage");
    run->add_option("--trace", trace, "Write the rule trace as JSON lines");

    std::string contract;
    std::vector<std::string> txs;
    CLI::App* layout = app.add_subcommand("layout", "Deploy a contract and print its storage layout");
    add_common(layout);
    layout->add_option("--contract", contract, "Contract to deploy")->required();
    layout->add_option("--tx", txs, "Parameterless functions to call before dumping");

    CLI::App* parse_cmd = app.add_subcommand("parse", "Parse and pretty-print sources");
    add_common(parse_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*run) return cmd_run(common, scenario, detect, trace);
        if (*layout) return cmd_layout(common, contract, txs);
        return cmd_parse(common);
    } catch (const Error& e) {
        report("solsem", e);
        return is_semantic(e.kind()) ? kExitInvalid : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
