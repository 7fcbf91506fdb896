// Runs the acceptance criteria and prints one PASS/FAIL line each.
// `--criterion N` runs a single one; the exit code is 0 only if all ran ones
// passed.

#include "fixtures.hpp"
#include "properties.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>

using namespace solsem;
using namespace fixtures;

namespace {

const std::map<std::string, std::string> kOracle = {
#include "oracle_hashes.inc"
};

/// Collects what went wrong inside one criterion.
struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    template <class A, class B>
    void eq(const A& actual, const B& expected, const std::string& what) {
        if (!(actual == expected)) {
            std::ostringstream ss;
            ss << what << ": got " << actual << ", want " << expected;
            failures.push_back(ss.str());
        }
    }
};

std::ostream& operator<<(std::ostream& os, const Word& w) { return os << decimal(w); }

const LayoutVar* var(const LayoutReport& r, const std::string& name) {
    for (const auto& v : r.vars)
        if (v.name == name) return &v;
    return nullptr;
}

std::map<std::string, std::string> frozen() {
    std::ifstream in(SOLSEM_FROZEN_FILE);
    std::map<std::string, std::string> out;
    std::string name, hex;
    while (in >> name >> hex) out[name] = hex;
    return out;
}

void layout_test(Check& c) {
    Run r = run("test");
    c.expect(!r.outcome.halted, "scenario halted");
    Harness h(program("test.sol"));
    h.run(Scenario::parse("deploy t Test()\n"));
    const LayoutReport rep = dump_layout(h.interpreter(), h.handles().at("t"));
    const LayoutVar* a = var(rep, "a");
    const LayoutVar* b = var(rep, "b");
    c.expect(a && b, "a and b laid out");
    if (!a || !b) return;
    c.eq(decimal(Word(a->byte_addr)), "0", "a byte");
    c.eq(a->size, 16u, "a size");
    c.eq(decimal(Word(b->byte_addr)), "32", "b byte");
    c.eq(b->size, 32u, "b size");
    c.eq(decimal(Word(rep.lambda)), "64", "lambda");
    Interpreter& in = h.interpreter();
    const TxResult t = in.transact(call(kS, h.handles().at("t"), "foo"));
    c.expect(t.ok, "foo succeeds");
    c.eq(eval(in, h.handles().at("t"), "a"), "0", "a after foo");
    c.eq(eval(in, h.handles().at("t"), "b"), "8", "b after foo");
}

void aliasing(Check& c) {
    Harness h(program("test2.sol"));
    h.run(Scenario::parse("deploy t Test2()\n"));
    const Address at = h.handles().at("t");
    const LayoutReport rep = dump_layout(h.interpreter(), at);
    c.eq(decimal(Word(rep.lambda)), "160", "lambda");
    const LayoutVar* b = var(rep, "b");
    c.expect(b != nullptr, "b laid out");
    if (b) {
        c.eq(b->slot, Word{1}, "b first slot");
        c.eq(b->size, 128u, "b size (slots 1-4)");
    }
    Interpreter& in = h.interpreter();
    c.eq(eval(in, at, "b"), "[[1,2,3],[4,5,6]]", "initial b");
    c.expect(in.transact(call(kS, at, "foo2")).ok, "foo2 succeeds");
    c.eq(eval(in, at, "b"), "[[0,10,0],[4,5,6]]", "b after foo2");
}

void dynamic_array(Check& c) {
    Run r = run("test3");
    const Address at = r.handle("t");
    const auto fz = frozen();
    const Word base = word_of_hex(kOracle.at("dyn_base0"));
    c.eq(kOracle.at("dyn_base0"), fz.at("dyn_base0"), "oracle vs frozen digest");
    c.eq(slot_of_dyn(0, 0), base, "engine keccak vs oracle");
    c.eq(storage_word(r.interp(), at, 0), Word{2}, "length slot");
    c.eq(storage_word(r.interp(), at, base), Word{10}, "a[0] slot");
    c.eq(storage_word(r.interp(), at, base + 1), Word{11}, "a[1] slot");
}

void mapping_test(Check& c) {
    Run r = run("test4");
    const Address at = r.handle("t");
    const auto fz = frozen();
    for (const char* k : {"map_0_100", "map_0_200"}) c.eq(kOracle.at(k), fz.at(k), std::string("oracle vs frozen ") + k);
    c.eq(storage_word(r.interp(), at, word_of_hex(kOracle.at("map_0_100"))), Word{10}, "m[100] slot");
    c.eq(storage_word(r.interp(), at, word_of_hex(kOracle.at("map_0_200"))), Word{11}, "m[200] slot");
    c.eq(eval(r.interp(), at, "a[100]"), "10", "m[100]");
    c.eq(eval(r.interp(), at, "a[200]"), "11", "m[200]");
    c.eq(eval(r.interp(), at, "a[300]"), "0", "m[300]");
}

void coin(Check& c) {
    Interpreter in(program("coin.sol"));
    const TxResult d = in.deploy("Coin", {}, kS);
    c.expect(d.ok, "deploy");
    const Address at = d.address;
    const auto bal = [&](const Address& who) { return eval(in, at, "balances[address(" + hex_address(who) + ")]"); };
    in.transact(call(kS, at, "mint", {addr_arg(kR), expr("5")}));
    c.eq(bal(kR), "5", "mint by S");
    in.transact(call(kX, at, "mint", {addr_arg(kR), expr("5")}));
    c.eq(bal(kR), "5", "mint by non-S");
    in.transact(call(kR, at, "send", {addr_arg(kR2), expr("3")}));
    c.eq(bal(kR), "2", "R after send");
    c.eq(bal(kR2), "3", "R2 after send");
    in.transact(call(kR, at, "send", {addr_arg(kR2), expr("99")}));
    c.eq(bal(kR), "2", "R after guarded send");
    c.eq(bal(kR2), "3", "R2 after guarded send");
    c.expect(run("coin").outcome.all_passed(), "coin scenario");
}

void dao(Check& c) {
    Run r = run("dao");
    c.expect(r.outcome.all_passed(), "dao scenario asserts");
    const Address bank = r.handle("bank");
    std::size_t max_omega = 0;
    for (const auto& e : r.interp().trace())
        if (e.addr == bank) max_omega = std::max(max_omega, e.omega);
    c.expect(max_omega >= 2, "omega depth on Bank >= 2, got " + std::to_string(max_omega));
    c.eq(r.interp().chain().balance_of(bank), Word{0}, "bank balance");
    const auto f = detect_reentrancy(r.interp().trace(), &r.interp().chain());
    bool named = !f.empty();
    for (const auto& x : f) named = named && x.contract == "Bank" && x.fn == "withdraw";
    c.expect(named, "findings name Bank.withdraw");

    Run fixed = run("dao_fixed");
    c.expect(fixed.outcome.all_passed(), "fixed scenario asserts");
    c.eq(detect_reentrancy(fixed.interp().trace()).size(), 0u, "fixed findings");
    const Word attack = fixed.interp().chain().balance_of(fixed.handle("attack"));
    c.expect(attack <= 4, "attacker ends with at most its own 2 wei back (" + decimal(attack) + ")");
    c.eq(fixed.interp().chain().balance_of(fixed.handle("bank")), Word{10}, "fixed bank balance");
}

void properties_suite(Check& c) {
    const auto report = [&](const char* name, const properties::Tally& t, std::uint64_t min_cases) {
        std::cout << "  " << name << ": " << t.held << "/" << t.cases << "\n";
        c.expect(t.cases >= min_cases, std::string(name) + " ran too few cases");
        c.expect(t.all(), std::string(name) + ": " + t.first_failure);
    };
    report("sizing oracle", properties::sizing_oracle(), 10000);
    report("codec round-trip", properties::codec_roundtrip(), 1000);
    report("atomicity", properties::atomicity(), 1);
    report("conservation", properties::conservation(), 200);
}

void coverage(Check& c) {
    std::set<std::string> seen;
    for (const char* base : {"test", "test2", "test3", "test4", "coin", "dao", "dao_fixed", "dao_depth1", "dao_proxy", "refs"}) {
        Run r = run(base);
        for (const auto& e : r.interp().trace()) {
            seen.insert(e.rule);
            seen.insert(e.premises.begin(), e.premises.end());
        }
    }
    for (const auto& l : all_rule_labels()) c.expect(seen.count(l) == 1, "missing label " + l);
}

struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
    double budget_s;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run one criterion (1-8)")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {"layout of Test", layout_test, 1},
        {"aliasing in Test2", aliasing, 1},
        {"dynamic array slots", dynamic_array, 1},
        {"mapping slots", mapping_test, 1},
        {"Coin end to end", coin, 1},
        {"DAO reentrancy", dao, 2},
        {"property suites", properties_suite, 0},
        {"rule label coverage", coverage, 0},
    };
    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only && static_cast<std::size_t>(only) != i + 1) continue;
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            all[i].run(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (all[i].budget_s > 0 && secs >= all[i].budget_s)
            c.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(all[i].budget_s) + " s");
        const bool pass = c.failures.empty();
        ok = ok && pass;
        std::printf("%s criterion %zu: %s (%.3f s)\n", pass ? "PASS" : "FAIL", i + 1, all[i].name, secs);
        for (const auto& f : c.failures) std::printf("  - %s\n", f.c_str());
        std::fflush(stdout);
    }
    return ok ? 0 : 1;
}
