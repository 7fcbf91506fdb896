#include <doctest.h>

#include "fixtures.hpp"

using namespace solsem;
using namespace fixtures;

namespace {

std::size_t count_rule(const std::vector<TraceEvent>& evs, const std::string& rule) {
    std::size_t n = 0;
    for (const auto& e : evs) n += e.rule == rule;
    return n;
}

}  // namespace

TEST_CASE("coin scenario") {
    Run r = run("coin");
    CHECK(!r.outcome.halted);
    CHECK(r.outcome.all_passed());
    CHECK(r.outcome.asserts.size() == 7);
}

TEST_CASE("coin transactions directly") {
    Interpreter in(program("coin.sol"));
    const TxResult d = in.deploy("Coin", {}, kS);
    REQUIRE(d.ok);
    CHECK(hex_address(d.address) == std::string(kInstanceBase));
    CHECK(eval(in, d.address, "minter") == hex_address(kS));
    REQUIRE(in.transact(call(kS, d.address, "mint", {addr_arg(kR), expr("5")})).ok);
    const TxResult t = in.transact(call(kR, d.address, "send", {addr_arg(kR2), expr("3")}));
    REQUIRE(t.ok);
    CHECK(count_rule(t.events, "TX") == 1);
    CHECK(count_rule(t.events, "SKIP1") + count_rule(t.events, "SKIP2") >= 1);
    CHECK(eval(in, d.address, "balances[address(" + hex_address(kR) + ")]") == "2");
}

TEST_CASE("an early return stops the body") {
    Interpreter in(program("coin.sol"));
    const Address c = in.deploy("Coin", {}, kS).address;
    const TxResult t = in.transact(call(kX, c, "mint", {addr_arg(kR), expr("5")}));
    REQUIRE(t.ok);
    CHECK(count_rule(t.events, "RETURN") == 1);
    CHECK(count_rule(t.events, "ASSIGN") == 0);
}

TEST_CASE("functions return values") {
    Interpreter in(program_src(R"(
contract A {
    uint x;
    function sq(uint v) returns (uint) { return v * v; }
    function f() returns (uint) { x = sq(3) + sq(4); return x; }
}
)"));
    const Address a = in.deploy("A", {}, kS).address;
    const TxResult t = in.transact(call(kS, a, "f"));
    REQUIRE(t.ok);
    REQUIRE(t.ret.has_value());
    CHECK(render_value(*t.ret, *t.ret_type) == "25");
    CHECK(count_rule(t.events, "E-FUN") == 3);  // the transaction entry and both calls to sq
}

TEST_CASE("DAO reentrancy nests frames and drains the bank") {
    Run r = run("dao");
    CHECK(r.outcome.all_passed());
    const Address bank = r.handle("bank");
    std::size_t max_omega = 0;
    for (const auto& e : r.interp().trace())
        if (e.addr == bank) max_omega = std::max(max_omega, e.omega);
    CHECK(max_omega >= 2);
    CHECK(r.interp().chain().balance_of(bank) == 0);
    CHECK(r.interp().chain().total_balance() == 12);
}

TEST_CASE("fixed bank keeps its funds") {
    Run r = run("dao_fixed");
    CHECK(r.outcome.all_passed());
    CHECK(r.interp().chain().balance_of(r.handle("bank")) == 10);
}

TEST_CASE("msg is restored after an external call") {
    Interpreter in(program_src(R"(
contract B {
    address seen;
    function poke() { seen = msg.sender; }
}
contract A {
    B b;
    address before;
    address later;
    function A(address x) { b = B(x); }
    function f() { before = msg.sender; b.poke(); later = msg.sender; }
}
)"));
    const Address b = in.deploy("B", {}, kS).address;
    const Address a = in.deploy("A", {addr_arg(b)}, kS).address;
    REQUIRE(in.transact(call(kR, a, "f")).ok);
    CHECK(eval(in, a, "before") == hex_address(kR));
    CHECK(eval(in, a, "later") == hex_address(kR));
    CHECK(eval(in, b, "seen") == hex_address(a));
    CHECK(in.chain().msg_stack.empty());
}

TEST_CASE("uninitialized storage pointers warn") {
    const auto prog = program("test.sol");
    REQUIRE(!prog->warnings().empty());
    CHECK(prog->warnings().front().severity == Diagnostic::Severity::Warning);
    CHECK(prog->warnings().front().message.find("'d'") != std::string::npos);
}

TEST_CASE("unbounded recursion hits the call depth limit") {
    Options o;
    o.max_call_depth = 50;
    Interpreter in(program_src("contract A { uint n; function f() { n = n + 1; f(); } }"), o);
    const Address a = in.deploy("A", {}, kS).address;
    const Chain before = in.chain();
    const TxResult t = in.transact(call(kS, a, "f"));
    CHECK(!t.ok);
    CHECK(t.error == ErrorKind::CallDepth);
    CHECK(eval(in, a, "n") == "0");
    Chain expect = before;
    ++expect.tx_count;
    CHECK(same_world(in.chain(), expect));
}

TEST_CASE("infinite loops hit the step limit") {
    Options o;
    o.max_steps = 10000;
    Interpreter in(program_src("contract A { uint n; function f() { while (true) { n = n + 1; } } }"), o);
    const Address a = in.deploy("A", {}, kS).address;
    const TxResult t = in.transact(call(kS, a, "f"));
    CHECK(!t.ok);
    CHECK(t.error == ErrorKind::StepLimit);
    CHECK(eval(in, a, "n") == "0");
}

TEST_CASE("value transfers need funds") {
    Interpreter in(program("dao.sol"));
    const Address bank = in.deploy("Bank", {}, kS).address;
    TxRequest dep = call(kR, bank, "deposit", {}, 5);
    TxResult t = in.transact(dep);
    CHECK(t.error == ErrorKind::InsufficientBalance);
    in.fund(kR, 5);
    t = in.transact(dep);
    REQUIRE(t.ok);
    CHECK(in.chain().balance_of(bank) == 5);
    CHECK(in.chain().balance_of(kR) == 0);
    CHECK(eval(in, bank, "credit[address(" + hex_address(kR) + ")]") == "5");
}

TEST_CASE("unknown receivers") {
    Interpreter in(program("coin.sol"));
    const TxResult t = in.transact(call(kS, kR, "mint"));
    CHECK(!t.ok);
    CHECK(t.error == ErrorKind::UnknownAddress);
}

TEST_CASE("while loops and conditionals") {
    Interpreter in(program_src(R"(
contract L {
    uint s;
    function f(uint n) {
        uint i = 0;
        while (i < n) {
            if (i % 2 == 0) s = s + i; else s = s + 100;
            i = i + 1;
        }
    }
}
)"));
    const Address a = in.deploy("L", {}, kS).address;
    const TxResult t = in.transact(call(kS, a, "f", {expr("5")}));
    REQUIRE(t.ok);
    CHECK(eval(in, a, "s") == "206");
    CHECK(count_rule(t.events, "WHILE2") == 5);  // iterate
    CHECK(count_rule(t.events, "WHILE1") == 1);  // exit
    CHECK(count_rule(t.events, "COND1") == 3);
    CHECK(count_rule(t.events, "COND2") == 2);
}
