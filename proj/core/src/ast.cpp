#include "solsem/ast.hpp"

namespace solsem::ast {

std::string_view to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "&&";
        case BinaryOp::Or: return "||";
    }
    return "?";
}

const FunctionDef* ContractDef::find_function(const std::string& fname) const {
    for (const auto& f : functions)
        if (f.kind == FunctionKind::Normal && f.name == fname) return &f;
    return nullptr;
}

const FunctionDef* ContractDef::constructor() const {
    for (const auto& f : functions)
        if (f.kind == FunctionKind::Constructor) return &f;
    return nullptr;
}

const FunctionDef* ContractDef::fallback() const {
    for (const auto& f : functions)
        if (f.kind == FunctionKind::Fallback) return &f;
    return nullptr;
}

const ContractDef* SourceUnit::find_contract(const std::string& cname) const {
    for (const auto& c : contracts)
        if (c.name == cname) return &c;
    return nullptr;
}

ExprPtr make_ident(std::string name, Span span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Ident;
    e->name = std::move(name);
    e->span = span;
    return e;
}

ExprPtr make_int(BigInt v, Span span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::IntLit;
    e->number = std::move(v);
    e->span = span;
    return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->binary_op = op;
    e->base = std::move(lhs);
    e->index = std::move(rhs);
    e->span = span;
    return e;
}

StmtPtr make_block(std::vector<StmtPtr> body, Span span) {
    auto s = std::make_shared<Stmt>();
    s->kind = StmtKind::Block;
    s->body = std::move(body);
    s->span = span;
    return s;
}

namespace {

template <typename T>
bool eq_ptr(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}

template <typename T>
bool eq_vec(const std::vector<std::shared_ptr<const T>>& a, const std::vector<std::shared_ptr<const T>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq_ptr(a[i], b[i])) return false;
    return true;
}

bool equal_params(const std::vector<Param>& a, const std::vector<Param>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].location != b[i].location || !eq_ptr(a[i].type, b[i].type)) return false;
    }
    return true;
}

bool equal_contract(const ContractDef& a, const ContractDef& b) {
    if (a.name != b.name) return false;
    if (a.state_vars.size() != b.state_vars.size() || a.structs.size() != b.structs.size() ||
        a.modifiers.size() != b.modifiers.size() || a.functions.size() != b.functions.size())
        return false;
    for (std::size_t i = 0; i < a.state_vars.size(); ++i) {
        const auto& x = a.state_vars[i];
        const auto& y = b.state_vars[i];
        if (x.name != y.name || x.specifiers != y.specifiers || !eq_ptr(x.type, y.type) || !eq_ptr(x.init, y.init))
            return false;
    }
    for (std::size_t i = 0; i < a.structs.size(); ++i) {
        if (a.structs[i].name != b.structs[i].name || !equal_params(a.structs[i].fields, b.structs[i].fields))
            return false;
    }
    for (std::size_t i = 0; i < a.modifiers.size(); ++i) {
        const auto& x = a.modifiers[i];
        const auto& y = b.modifiers[i];
        if (x.name != y.name || !equal_params(x.params, y.params) || !eq_ptr(x.body, y.body)) return false;
    }
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
        const auto& x = a.functions[i];
        const auto& y = b.functions[i];
        if (x.name != y.name || x.kind != y.kind || x.specifiers != y.specifiers || !equal_params(x.params, y.params) ||
            !equal_params(x.returns, y.returns) || !eq_ptr(x.body, y.body) || x.modifiers.size() != y.modifiers.size())
            return false;
        for (std::size_t m = 0; m < x.modifiers.size(); ++m) {
            if (x.modifiers[m].name != y.modifiers[m].name || !eq_vec(x.modifiers[m].args, y.modifiers[m].args))
                return false;
        }
    }
    return true;
}

}  // namespace

bool equal(const TypeName& a, const TypeName& b) {
    return a.kind == b.kind && a.name == b.name && a.length == b.length && eq_ptr(a.elem, b.elem) &&
           eq_ptr(a.key, b.key);
}

bool equal(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.name == b.name && a.number == b.number && a.bool_value == b.bool_value &&
           a.text == b.text && a.binary_op == b.binary_op && a.unary_op == b.unary_op && eq_ptr(a.base, b.base) &&
           eq_ptr(a.index, b.index) && eq_ptr(a.alt, b.alt) && eq_ptr(a.value_expr, b.value_expr) &&
           eq_ptr(a.gas_expr, b.gas_expr) && eq_vec(a.args, b.args) && eq_ptr(a.type_name, b.type_name);
}

bool equal(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.name == b.name && a.location == b.location && eq_ptr(a.type, b.type) &&
           eq_ptr(a.target, b.target) && eq_ptr(a.expr, b.expr) && eq_ptr(a.then_branch, b.then_branch) &&
           eq_ptr(a.else_branch, b.else_branch) && eq_vec(a.body, b.body);
}

bool equal(const SourceUnit& a, const SourceUnit& b) {
    if (a.contracts.size() != b.contracts.size()) return false;
    for (std::size_t i = 0; i < a.contracts.size(); ++i)
        if (!equal_contract(a.contracts[i], b.contracts[i])) return false;
    return true;
}

}  // namespace solsem::ast
