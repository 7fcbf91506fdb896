#pragma once

#include "solsem/interpreter.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace solsem {

struct ScenarioAction {
    enum class Kind { Deploy, Tx, Assert, Fund };
    Kind kind = Kind::Tx;
    std::size_t line = 0;
    std::string text;  // the source line, for reporting

    std::string handle;    // deploy target / tx receiver / assert instance
    std::string contract;  // deploy
    std::string fn;        // tx; empty for the fallback
    std::vector<std::string> args;
    std::string from;  // account name, handle or 0x address; empty = default sender
    std::string value = "0";
    std::string gas = "0";
    std::string expr;      // assert
    std::string expected;  // assert
    bool expect_abort = false;
};

/// Line-oriented scenario:
///   deploy <h> <Contract>(args) [from A] [value n] [gas n] [expect abort]
///   tx <h>.<fn>(args) [from A] [value n] [gas n] [expect abort]
///   assert <h>.<expr> == <value>
///   fund <A> <n>
/// `#` starts a comment. Account names are bare identifiers that are given
/// fixed addresses on first use.
struct Scenario {
    std::vector<ScenarioAction> actions;

    /// Throws Error(SyntaxError) with the offending line.
    static Scenario parse(std::string_view text);
};

struct AssertionResult {
    std::size_t line = 0;
    std::string text;
    bool passed = false;
    std::string actual;
    std::string expected;
    std::string message;  // evaluation error, if any
};

struct ActionOutcome {
    std::size_t line = 0;
    std::string text;
    TxResult result;
};

struct ScenarioOutcome {
    bool halted = false;  // a deploy/tx failed unexpectedly
    std::optional<ErrorKind> error;
    std::string message;
    std::size_t halt_line = 0;
    std::vector<ActionOutcome> actions;
    std::vector<AssertionResult> asserts;

    bool all_passed() const;
};

struct ReentrancyFinding {
    Address victim = 0;
    std::string contract;
    std::string fn;
    std::uint64_t outer_seq = 0;
    std::uint64_t reentrant_seq = 0;
    std::vector<std::pair<Address, std::string>> path;  // outer frame .. reentrant frame
    std::vector<TraceWrite> writes;  // outer frame's storage writes after the reentry
};

/// A finding is reported for every frame on α that was re-entered and then
/// wrote α's storage after the nested entry. With a chain, findings also
/// carry the victim's contract name.
std::vector<ReentrancyFinding> detect_reentrancy(const std::vector<TraceEvent>& trace, const Chain* chain = nullptr);

struct LayoutVar {
    std::string name;
    std::string type;
    ByteAddr byte_addr;
    Word slot;
    std::uint64_t offset = 0;
    std::uint64_t size = 0;
    std::string value;
};

struct LayoutRegion {
    std::string kind;
    std::string base;
    Word base_slot;
    std::string key;
    Word slot;
    std::string type;
    std::string value;
};

struct LayoutReport {
    std::string contract;
    Address address = 0;
    ByteAddr lambda;
    std::vector<LayoutVar> vars;
    std::vector<LayoutRegion> regions;
};

LayoutReport dump_layout(Interpreter& interp, const Address& at);

/// Owns an interpreter plus the scenario name spaces (handles, accounts).
class Harness {
public:
    explicit Harness(std::shared_ptr<const Program> program, Options options = {});

    Interpreter& interpreter() noexcept { return interp_; }
    const std::map<std::string, Address>& handles() const noexcept { return handles_; }
    const std::map<std::string, Address>& accounts() const noexcept { return accounts_; }

    /// Address of a handle, an account name (allocated on first use) or a
    /// 0x literal.
    Address resolve_address(const std::string& name);

    ScenarioOutcome run(const Scenario& s);

    /// Deploys `Main` and calls `main()`.
    ScenarioOutcome run_main();

    /// Default sender for actions without `from`.
    static constexpr std::string_view kDefaultSender = "sender";

private:
    TxResult run_action(const ScenarioAction& a);
    AssertionResult run_assert(const ScenarioAction& a);
    std::string substitute(const std::string& text, const ContractInfo* scope);

    Interpreter interp_;
    std::map<std::string, Address> handles_;
    std::map<std::string, Address> accounts_;
};

/// Fixed address assigned to the n-th named account (1-based).
Address account_address(std::size_t n);

// JSON renderings (stable key order, no timestamps).
std::string trace_event_json(const TraceEvent& ev);
std::string trace_jsonl(const std::vector<TraceEvent>& trace);
std::string layout_json(const LayoutReport& r, int indent = 2);
std::string findings_json(const std::vector<ReentrancyFinding>& f, int indent = 2);
std::string outcome_json(const ScenarioOutcome& o, const std::vector<ReentrancyFinding>* findings, int indent = 2);

}  // namespace solsem
