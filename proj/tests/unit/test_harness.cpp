#include <doctest.h>

#include "fixtures.hpp"

#include <json.hpp>

using namespace solsem;
using namespace fixtures;

TEST_CASE("scenario lines parse") {
    const Scenario s = Scenario::parse(
        "# comment\n"
        "deploy bank Bank() from Owner value 3\n"
        "fund bank 10\n"
        "tx bank.withdraw(2) from Mallory gas 7 expect abort\n"
        "tx attack.() value 1\n"
        "assert bank.getUserBalance(attack) == 2\n");
    REQUIRE(s.actions.size() == 5);
    CHECK(s.actions[0].kind == ScenarioAction::Kind::Deploy);
    CHECK(s.actions[0].line == 2);
    CHECK(s.actions[0].contract == "Bank");
    CHECK(s.actions[0].from == "Owner");
    CHECK(s.actions[0].value == "3");
    CHECK(s.actions[1].kind == ScenarioAction::Kind::Fund);
    CHECK(s.actions[2].fn == "withdraw");
    CHECK(s.actions[2].args == std::vector<std::string>{"2"});
    CHECK(s.actions[2].gas == "7");
    CHECK(s.actions[2].expect_abort);
    CHECK(s.actions[3].fn.empty());
    CHECK(s.actions[4].expr == "getUserBalance(attack)");
    CHECK(s.actions[4].expected == "2");
}

TEST_CASE("malformed scenario lines are syntax errors") {
    for (const char* bad : {"deploy", "tx bank", "assert bank.x", "fund", "launch x", "tx bank.f() from"}) {
        CAPTURE(bad);
        try {
            Scenario::parse(bad);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SyntaxError);
        }
    }
}

TEST_CASE("an empty scenario leaves an empty trace") {
    Harness h(program("coin.sol"));
    const ScenarioOutcome o = h.run(Scenario::parse(read("empty.scn")));
    CHECK(o.all_passed());
    CHECK(o.actions.empty());
    CHECK(h.interpreter().trace().empty());
    CHECK(detect_reentrancy(h.interpreter().trace()).empty());
}

TEST_CASE("failed assertions and unexpected aborts are reported") {
    Harness h(program("coin.sol"));
    const ScenarioOutcome o = h.run(Scenario::parse("deploy c Coin() from S\nassert c.minter == R\n"));
    REQUIRE(o.asserts.size() == 1);
    CHECK(!o.asserts[0].passed);
    CHECK(!o.all_passed());

    Harness h2(program("coin.sol"));
    const ScenarioOutcome o2 = h2.run(Scenario::parse("deploy c Coin()\ntx c.nope()\nassert c.minter == sender\n"));
    CHECK(o2.halted);
    CHECK(o2.halt_line == 2);
}

TEST_CASE("expected aborts do not halt") {
    Harness h(program("dao.sol"));
    const ScenarioOutcome o =
        h.run(Scenario::parse("deploy b Bank()\ntx b.deposit() from R value 5 expect abort\nassert b.balance == 0\n"));
    CHECK(!o.halted);
    CHECK(o.all_passed());
}

TEST_CASE("no external calls means no findings") {
    for (const char* base : {"coin", "test", "test2", "test3", "test4", "refs"}) {
        CAPTURE(base);
        Run r = run(base);
        CHECK(r.outcome.all_passed());
        CHECK(detect_reentrancy(r.interp().trace()).empty());
    }
}

TEST_CASE("the detector names the victim") {
    Run r = run("dao");
    const auto f = detect_reentrancy(r.interp().trace(), &r.interp().chain());
    REQUIRE(!f.empty());
    for (const auto& x : f) {
        CHECK(x.contract == "Bank");
        CHECK(x.fn == "withdraw");
        CHECK(x.victim == r.handle("bank"));
        CHECK(!x.writes.empty());
        CHECK(x.reentrant_seq > x.outer_seq);
    }
    Run fixed = run("dao_fixed");
    CHECK(detect_reentrancy(fixed.interp().trace()).empty());
    Run depth1 = run("dao_depth1");
    CHECK(depth1.outcome.all_passed());
    CHECK(detect_reentrancy(depth1.interp().trace()).size() == 1);
    Run proxy = run("dao_proxy");
    CHECK(proxy.outcome.all_passed());
    const auto pf = detect_reentrancy(proxy.interp().trace());
    REQUIRE(!pf.empty());
    CHECK(pf.front().path.size() >= 3);  // bank -> proxy -> attack -> proxy -> bank
}

TEST_CASE("layout of an empty contract") {
    Harness h(program_src("contract E { }"));
    const ScenarioOutcome o = h.run(Scenario::parse("deploy e E()\n"));
    REQUIRE(o.all_passed());
    const LayoutReport rep = dump_layout(h.interpreter(), h.handles().at("e"));
    CHECK(rep.lambda == 0);
    CHECK(rep.vars.empty());
    CHECK(rep.regions.empty());
}

TEST_CASE("layout lists variables and hashed regions") {
    Run r = run("test4");
    const LayoutReport rep = dump_layout(r.interp(), r.handle("t"));
    REQUIRE(rep.vars.size() == 1);
    CHECK(rep.vars[0].type == "mapping(uint256=>uint256)");
    REQUIRE(rep.regions.size() == 2);
    for (const auto& reg : rep.regions) CHECK(reg.kind == "map");

    Run r2 = run("test2");
    const LayoutReport rep2 = dump_layout(r2.interp(), r2.handle("t"));
    CHECK(rep2.lambda == 160);
    REQUIRE(rep2.vars.size() == 2);
    CHECK(rep2.vars[1].slot == 1);
    CHECK(rep2.vars[1].size == 128);
}

TEST_CASE("traces are deterministic") {
    Run a = run("dao");
    Run b = run("dao");
    CHECK(trace_jsonl(a.interp().trace()) == trace_jsonl(b.interp().trace()));
}

TEST_CASE("json shapes") {
    Run r = run("dao");
    const auto ev = nlohmann::json::parse(trace_event_json(r.interp().trace().front()));
    for (const char* k : {"seq", "rule", "addr", "fn", "writes", "omega", "tx", "premises"}) CHECK(ev.contains(k));
    const auto lay = nlohmann::json::parse(layout_json(dump_layout(r.interp(), r.handle("bank"))));
    CHECK(lay["contract"] == "Bank");
    CHECK(lay["hashedRegions"].is_array());
    const auto findings = detect_reentrancy(r.interp().trace());
    const auto out = nlohmann::json::parse(outcome_json(r.outcome, &findings));
    CHECK(out["ok"] == false);  // findings make the run fail
    CHECK(out["findings"].size() == findings.size());
}

TEST_CASE("run_main deploys Main and calls main") {
    Harness h(program_src("contract Main { uint x; function main() { x = 3; } }"));
    const ScenarioOutcome o = h.run_main();
    CHECK(o.all_passed());
    CHECK(!o.halted);
}
