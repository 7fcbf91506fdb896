#pragma once

#include "solsem/keccak.hpp"
#include "solsem/program.hpp"
#include "solsem/state.hpp"
#include "solsem/trace.hpp"
#include "solsem/typing.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace solsem {

struct Options {
    MapHashOrder hash_order = MapHashOrder::BaseThenKey;
    /// Statement/iteration budget per transaction; 0 = unlimited.
    std::uint64_t max_steps = 0;
    /// Nesting limit for call frames (internal and external).
    std::size_t max_call_depth = 1024;
};

/// Outcome of a deployment or transaction. On failure the world is exactly
/// as before and `events` holds the discarded trace of the attempt.
struct TxResult {
    bool ok = true;
    std::optional<ErrorKind> error;
    std::string message;
    Span span;
    std::optional<Value> ret;
    TypePtr ret_type;
    Address address = 0;  // deployed instance, for deployments
    std::vector<TraceEvent> events;
    std::vector<Diagnostic> warnings;
};

struct TxRequest {
    Address from = 0;
    Address to = 0;
    std::string fn;  // empty: fallback
    std::vector<ast::ExprPtr> args;  // literal expressions
    Word value = 0;
    Word gas = 0;
};

/// The world Δ together with the rule engine that rewrites it.
class Interpreter {
public:
    explicit Interpreter(std::shared_ptr<const Program> program, Options options = {});
    ~Interpreter();
    Interpreter(Interpreter&&) noexcept;
    Interpreter& operator=(Interpreter&&) noexcept;

    const Program& program() const noexcept;
    const Options& options() const noexcept;
    /// Takes effect from the next deployment or transaction.
    void set_options(const Options& options) noexcept;
    Chain& chain() noexcept;
    const Chain& chain() const noexcept;

    /// Committed trace across all successful transactions.
    const std::vector<TraceEvent>& trace() const noexcept;

    TxResult deploy(const std::string& contract, const std::vector<ast::ExprPtr>& args, const Address& from,
                    const Word& value = 0, const Word& gas = 0);
    TxResult transact(const TxRequest& tx);

    /// Credits `amount` wei to an account or instance.
    void fund(const Address& who, const Word& amount);

    /// Evaluates `e` inside instance `at` without changing the world.
    /// `locals` are bound as address-typed names when they do not clash with
    /// state variables. Returns the value and its type.
    std::pair<Value, TypePtr> evaluate(const Address& at, const ast::Expr& e,
                                       const std::vector<std::pair<std::string, Address>>& locals = {});

    /// Converts a literal expression to the representation of type `t`.
    Value literal_value(const Address& at, const ast::Expr& e, const TypePtr& t);

    /// Reads the current value of a state variable.
    Value read_state_var(const Address& at, const std::string& name);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Human-readable rendering of a value: decimal integers, 0x addresses,
/// nested brackets for arrays, braces for structs.
std::string render_value(const Value& v, const SemType& t);

/// Two's complement aware arithmetic on decoded operands of type `t`.
Word apply_binop(ast::BinaryOp op, const Word& lhs, const Word& rhs, const SemType& t);

}  // namespace solsem
