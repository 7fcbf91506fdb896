#pragma once

#include "solsem/errors.hpp"
#include "solsem/numeric.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace solsem::ast {

struct TypeName;
struct Expr;
struct Stmt;
using TypeNamePtr = std::shared_ptr<const TypeName>;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct TypeName {
    enum class Kind { Elementary, UserDefined, Array, Mapping };

    Kind kind = Kind::Elementary;
    std::string name;            // Elementary / UserDefined
    TypeNamePtr elem;            // Array element, Mapping value
    TypeNamePtr key;             // Mapping key
    std::optional<BigInt> length;  // Array: fixed length; nullopt = dynamic
    Span span;
};

enum class DataLocation { Default, Storage, Memory };

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Not, Neg };

std::string_view to_string(BinaryOp op);

enum class ExprKind {
    Ident,
    IntLit,
    BoolLit,
    StringLit,
    ArrayLit,      // args = elements
    Index,         // base[index]
    Member,        // base.name
    Call,          // name(args): internal call or contract-type conversion
    TypeConv,      // type_name(args[0])
    ExternalCall,  // base.name.value(value_expr).gas(gas_expr)(args)
    LowLevelCall,  // base.call.value(value_expr).gas(gas_expr)()
    Push,          // base.push(args[0])
    ArrayLength,   // base.length
    Binary,        // base op index
    Unary,         // op base
    Conditional,   // base ? index : alt
    MsgSender,
    MsgValue,
    This,
    Balance,       // base.balance
};

struct Expr {
    ExprKind kind = ExprKind::Ident;
    Span span;

    std::string name;
    BigInt number;
    bool bool_value = false;
    std::string text;
    BinaryOp binary_op = BinaryOp::Add;
    UnaryOp unary_op = UnaryOp::Not;

    ExprPtr base;
    ExprPtr index;
    ExprPtr alt;
    ExprPtr value_expr;
    ExprPtr gas_expr;
    std::vector<ExprPtr> args;
    TypeNamePtr type_name;
};

enum class StmtKind { VarDecl, Assign, If, While, Return, ExprStmt, Block, Placeholder };

struct Stmt {
    StmtKind kind = StmtKind::Block;
    Span span;

    // VarDecl; `type` is null for `var`
    TypeNamePtr type;
    DataLocation location = DataLocation::Default;
    std::string name;

    ExprPtr target;  // Assign lhs
    ExprPtr expr;    // VarDecl init, Assign rhs, If/While condition, Return value, ExprStmt
    StmtPtr then_branch;  // If then, While body
    StmtPtr else_branch;
    std::vector<StmtPtr> body;  // Block
};

struct Param {
    TypeNamePtr type;
    DataLocation location = DataLocation::Default;
    std::string name;  // may be empty for unnamed returns
    Span span;
};

struct StateVarDecl {
    TypeNamePtr type;
    std::string name;
    ExprPtr init;
    std::vector<std::string> specifiers;
    Span span;
};

struct StructDef {
    std::string name;
    std::vector<Param> fields;
    Span span;
};

struct ModifierDef {
    std::string name;
    std::vector<Param> params;
    StmtPtr body;
    Span span;
};

struct ModifierInvocation {
    std::string name;
    std::vector<ExprPtr> args;
    Span span;
};

enum class FunctionKind { Normal, Constructor, Fallback };

struct FunctionDef {
    std::string name;
    FunctionKind kind = FunctionKind::Normal;
    std::vector<Param> params;
    std::vector<Param> returns;
    std::vector<ModifierInvocation> modifiers;
    std::vector<std::string> specifiers;  // public, payable, constant, …: retained, inert
    StmtPtr body;
    Span span;
};

struct ContractDef {
    std::string name;
    std::vector<StateVarDecl> state_vars;
    std::vector<StructDef> structs;
    std::vector<ModifierDef> modifiers;
    std::vector<FunctionDef> functions;
    Span span;

    const FunctionDef* find_function(const std::string& fname) const;
    const FunctionDef* constructor() const;
    const FunctionDef* fallback() const;
};

struct SourceUnit {
    std::vector<ContractDef> contracts;

    const ContractDef* find_contract(const std::string& cname) const;
};

// Node construction helpers used by the parser and by desugaring.
ExprPtr make_ident(std::string name, Span span = {});
ExprPtr make_int(BigInt v, Span span = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span = {});
StmtPtr make_block(std::vector<StmtPtr> body, Span span = {});

/// Structural equality that ignores source spans.
bool equal(const TypeName& a, const TypeName& b);
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const SourceUnit& a, const SourceUnit& b);

}  // namespace solsem::ast
