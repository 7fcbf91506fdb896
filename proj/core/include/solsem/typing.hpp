#pragma once

#include "solsem/program.hpp"

#include <functional>

namespace solsem {

/// Static type of an expression with the location class its bytes live in
/// (what the rules call ST). `type` is null for calls without a return value.
struct Typed {
    TypePtr type;
    Location loc = Location::Memory;
    bool literal = false;  // integer literal, adopts the type of its context
};

/// Name resolution for the memory name space of the current frame; storage
/// names come from the contract.
using LocalLookup = std::function<TypePtr(const std::string&)>;

struct TypeContext {
    const Program& program;
    const ContractInfo& contract;
    LocalLookup local;
};

/// Type_σ exp, following the Type1–Type8 rules. Records the rule labels used
/// in `log`. Throws TypeError / UnknownIdentifier.
Typed type_of(const TypeContext& ctx, const ast::Expr& e, RuleLog* log = nullptr);

/// ST exp
inline Location storage_class(const TypeContext& ctx, const ast::Expr& e) { return type_of(ctx, e).loc; }

/// Whether a value of type `from` may be stored into a location of type `to`.
bool assignable(const Typed& from, const SemType& to);

/// Arithmetic result type of two operands.
TypePtr common_type(const Typed& a, const Typed& b);

/// Strips one ref layer.
inline const SemType& deref(const SemType& t) { return t.kind() == TypeKind::Ref ? *t.inner() : t; }

}  // namespace solsem
