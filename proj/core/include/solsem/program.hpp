#pragma once

#include "solsem/ast.hpp"
#include "solsem/parser.hpp"
#include "solsem/types.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace solsem {

struct ParamInfo {
    std::string name;
    TypePtr type;  // type of the memory binding (complex types are refs)
    Span span;
};

/// An entry of the function table Γ: parameters and return binding (Γ_t),
/// the body with modifiers applied (Γ_p) and the modifier guard condition.
struct FunctionInfo {
    std::string name;
    ast::FunctionKind kind = ast::FunctionKind::Normal;
    std::vector<ParamInfo> params;
    std::optional<ParamInfo> ret;
    /// Conjunction of guard-form modifiers (`if (c) _;`); null means true.
    ast::ExprPtr guard;
    ast::StmtPtr body;
    bool payable = false;
    const ast::FunctionDef* def = nullptr;
};

struct StateVarInfo {
    std::string name;
    TypePtr type;
    ast::ExprPtr init;
    Span span;
};

struct ContractInfo {
    std::string name;
    const ast::ContractDef* def = nullptr;
    std::map<std::string, TypePtr> structs;
    std::vector<StateVarInfo> state_vars;
    std::map<std::string, FunctionInfo> functions;
    std::optional<FunctionInfo> constructor;
    std::optional<FunctionInfo> fallback;

    const FunctionInfo* function(const std::string& fname) const;
    const StateVarInfo* state_var(const std::string& vname) const;
};

/// A checked, resolved set of contracts ready for execution.
class Program {
public:
    /// Resolves types, builds the function tables and runs the static
    /// checker. Throws solsem::Error for the first semantic error.
    static std::shared_ptr<const Program> build(ast::SourceUnit unit);

    /// Parses and builds; parse failures are thrown as the first diagnostic.
    static std::shared_ptr<const Program> from_source(std::string_view source, const ParseOptions& opts = {});

    const ContractInfo* contract(const std::string& name) const;
    const std::map<std::string, ContractInfo>& contracts() const noexcept { return contracts_; }
    const ast::SourceUnit& unit() const noexcept { return *unit_; }

    /// Resolves a source type name in the context of `c` (for struct names).
    TypePtr resolve(const ast::TypeName& tn, const ContractInfo& c) const;

    /// Type of a local variable or parameter binding. Complex types become
    /// refs: to storage for locals without a location, to memory for
    /// parameters without one.
    TypePtr binding_type(const ast::TypeName& tn, ast::DataLocation loc, bool is_param, const ContractInfo& c) const;

    /// Warnings collected by the checker (e.g. uninitialized storage pointers).
    const std::vector<Diagnostic>& warnings() const noexcept { return warnings_; }

private:
    std::shared_ptr<ast::SourceUnit> unit_;
    std::map<std::string, ContractInfo> contracts_;
    std::vector<Diagnostic> warnings_;

    friend class ProgramBuilder;
};

}  // namespace solsem
