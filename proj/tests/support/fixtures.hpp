#pragma once

#include "solsem/harness.hpp"
#include "solsem/parser.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(SOLSEM_FIXTURE_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
    std::ifstream in(path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::shared_ptr<const solsem::Program> program(const std::string& sol) {
    return solsem::Program::from_source(read(sol));
}

inline std::shared_ptr<const solsem::Program> program_src(std::string_view src) {
    return solsem::Program::from_source(src);
}

/// Runs `<base>.scn` against `<base>.sol` in a fresh harness.
struct Run {
    std::unique_ptr<solsem::Harness> harness;
    solsem::ScenarioOutcome outcome;

    solsem::Interpreter& interp() { return harness->interpreter(); }
    solsem::Address handle(const std::string& h) const { return harness->handles().at(h); }
};

inline Run run(const std::string& base, solsem::Options opts = {}) {
    Run r;
    r.harness = std::make_unique<solsem::Harness>(program(base + ".sol"), opts);
    r.outcome = r.harness->run(solsem::Scenario::parse(read(base + ".scn")));
    return r;
}

inline solsem::ast::ExprPtr expr(const std::string& text) {
    solsem::ParseOptions po;
    po.hex_literals = true;
    return solsem::parse_expression(text, po);
}

inline solsem::ast::ExprPtr addr_arg(const solsem::Address& a) { return expr("address(" + solsem::hex_address(a) + ")"); }

/// Evaluates `text` inside instance `at` and renders the value.
inline std::string eval(solsem::Interpreter& in, const solsem::Address& at, const std::string& text) {
    auto [v, t] = in.evaluate(at, *expr(text));
    return solsem::render_value(v, *t);
}

inline solsem::Word storage_word(solsem::Interpreter& in, const solsem::Address& at, const solsem::Word& slot) {
    const solsem::Bytes b = in.chain().find(at)->config.storage.bytes.read(solsem::slot_to_addr(slot), 32);
    return solsem::from_be(b.data(), b.size());
}

inline solsem::Word word_of_hex(const std::string& hex) { return solsem::Word(solsem::parse_integer("0x" + hex)); }

inline const solsem::Address kS = solsem::account_address(101);
inline const solsem::Address kR = solsem::account_address(102);
inline const solsem::Address kR2 = solsem::account_address(103);
inline const solsem::Address kX = solsem::account_address(104);

inline solsem::TxRequest call(const solsem::Address& from, const solsem::Address& to, std::string fn,
                              std::vector<solsem::ast::ExprPtr> args = {}, solsem::Word value = 0) {
    solsem::TxRequest tx;
    tx.from = from;
    tx.to = to;
    tx.fn = std::move(fn);
    tx.args = std::move(args);
    tx.value = value;
    return tx;
}

}  // namespace fixtures
