#include "solsem/typing.hpp"

namespace solsem {

using namespace ast;

namespace {

Error type_error(const std::string& msg, const Expr& e) { return Error(ErrorKind::TypeError, msg, e.span); }

TypePtr uint256() {
    static const TypePtr t = SemType::uint(256);
    return t;
}

bool integer_like(const Typed& t) { return t.type && t.type->is_integer(); }

const SemType& require_value(const Typed& t, const Expr& e) {
    if (!t.type) throw type_error("expression has no value", e);
    return *t.type;
}

/// Index key/position compatibility for arrays (Type1/Type7 demand uint).
void check_index(const Typed& idx, const Expr& e) {
    if (!integer_like(idx)) throw type_error("array index must be an integer", e);
}

void check_key(const Typed& key, const SemType& expected, const Expr& e) {
    if (!assignable(key, expected))
        throw type_error("mapping key of type " + (key.type ? key.type->str() : std::string("void")) +
                             " does not match " + expected.str(),
                         e);
}

const FunctionInfo* external_target(const TypeContext& ctx, const Typed& base, const Expr& e) {
    const SemType& bt = require_value(base, e);
    if (bt.kind() != TypeKind::Contract)
        throw type_error("external call requires a contract-typed receiver, got " + bt.str(), e);
    const ContractInfo* callee = ctx.program.contract(bt.name());
    if (!callee) throw Error(ErrorKind::UnknownIdentifier, "unknown contract '" + bt.name() + "'", e.span);
    const FunctionInfo* f = callee->function(e.name);
    if (!f) throw Error(ErrorKind::UnknownIdentifier, "contract " + bt.name() + " has no function '" + e.name + "'", e.span);
    return f;
}

}  // namespace

TypePtr common_type(const Typed& a, const Typed& b) {
    if (a.literal && b.literal) return uint256();
    if (a.literal) return b.type;
    if (b.literal) return a.type;
    if (a.type->kind() == TypeKind::Int || b.type->kind() == TypeKind::Int) return SemType::int256();
    return a.type->bits() >= b.type->bits() ? a.type : b.type;
}

bool assignable(const Typed& from, const SemType& to) {
    if (!from.type) return false;
    const SemType& f = *from.type;
    switch (to.kind()) {
        case TypeKind::UInt:
            if (from.literal) return true;
            return f.kind() == TypeKind::UInt && f.bits() <= to.bits();
        case TypeKind::Int:
            return from.literal || f.kind() == TypeKind::Int;
        case TypeKind::Bool:
            return f.kind() == TypeKind::Bool;
        case TypeKind::Address:
        case TypeKind::Contract:
            return f.is_address_like();
        case TypeKind::String:
            return f.kind() == TypeKind::String;
        case TypeKind::StaticArray: {
            const SemType& src = deref(f);
            if (src.kind() != TypeKind::StaticArray || src.count() != to.count()) return false;
            // Array literals carry the element type of their first element;
            // compare element-wise with literal leniency.
            Typed elem{src.elem(), from.loc, from.literal};
            if (src.elem()->is_integer() && to.elem()->is_integer()) return true;
            return assignable(elem, *to.elem());
        }
        case TypeKind::Struct:
            return same_type(deref(f), to);
        case TypeKind::Ref:
            return same_type(deref(f), *to.inner()) ||
                   (to.inner()->kind() == TypeKind::StaticArray && assignable(from, *to.inner()));
        case TypeKind::DynArray:
        case TypeKind::Mapping:
            return false;
    }
    return false;
}

Typed type_of(const TypeContext& ctx, const Expr& e, RuleLog* log) {
    switch (e.kind) {
        case ExprKind::Ident: {
            note(log, "Type3");
            if (ctx.local) {
                if (TypePtr t = ctx.local(e.name)) return {t, Location::Memory};
            }
            if (const auto* sv = ctx.contract.state_var(e.name)) return {sv->type, Location::Storage};
            throw Error(ErrorKind::UnknownIdentifier, "undeclared identifier '" + e.name + "'", e.span);
        }
        case ExprKind::IntLit:
            return {uint256(), Location::Memory, true};
        case ExprKind::BoolLit:
            return {SemType::boolean(), Location::Memory};
        case ExprKind::StringLit:
            return {SemType::string(), Location::Memory};
        case ExprKind::ArrayLit: {
            const Typed first = type_of(ctx, *e.args.front(), log);
            bool literal = first.literal;
            for (std::size_t i = 1; i < e.args.size(); ++i) {
                const Typed t = type_of(ctx, *e.args[i], log);
                literal = literal && t.literal;
            }
            return {SemType::static_array(first.type, e.args.size()), Location::Memory, literal};
        }
        case ExprKind::Index: {
            const Typed base = type_of(ctx, *e.base, log);
            const Typed idx = type_of(ctx, *e.index, log);
            const SemType& bt = require_value(base, *e.base);
            const bool is_ref = bt.kind() == TypeKind::Ref;
            const SemType& inner = deref(bt);
            const Location loc = is_ref ? bt.pointee() : base.loc;
            switch (inner.kind()) {
                case TypeKind::StaticArray:
                    note(log, is_ref ? "Type7" : "Type1");
                    check_index(idx, *e.index);
                    return {inner.elem(), loc};
                case TypeKind::DynArray:
                    note(log, is_ref ? "Type7" : "Type1");
                    check_index(idx, *e.index);
                    return {inner.elem(), Location::Storage};
                case TypeKind::Mapping:
                    note(log, is_ref ? "Type6" : "Type4");
                    check_key(idx, *inner.key(), *e.index);
                    return {inner.value(), Location::Storage};
                default:
                    throw type_error("cannot index a value of type " + bt.str(), e);
            }
        }
        case ExprKind::Member: {
            const Typed base = type_of(ctx, *e.base, log);
            const SemType& bt = require_value(base, *e.base);
            const bool is_ref = bt.kind() == TypeKind::Ref;
            const SemType& inner = deref(bt);
            if (inner.kind() != TypeKind::Struct) throw type_error("member access on non-struct type " + bt.str(), e);
            note(log, is_ref ? "Type8" : "Type2");
            for (const auto& f : inner.fields())
                if (f.name == e.name) return {f.type, is_ref ? bt.pointee() : base.loc};
            throw type_error("struct " + inner.name() + " has no member '" + e.name + "'", e);
        }
        case ExprKind::Call: {
            if (const FunctionInfo* f = ctx.contract.function(e.name)) {
                note(log, "Type5");
                note(log, "Size6");
                if (!f->ret) return {nullptr, Location::Memory};
                const TypePtr& rt = f->ret->type;
                return {rt->kind() == TypeKind::Ref ? rt->inner() : rt, Location::Memory};
            }
            if (ctx.program.contract(e.name)) return {SemType::contract(e.name), Location::Memory};
            throw Error(ErrorKind::UnknownIdentifier, "undeclared function '" + e.name + "'", e.span);
        }
        case ExprKind::TypeConv: {
            const TypePtr t = ctx.program.resolve(*e.type_name, ctx.contract);
            if (!t->is_primitive()) throw type_error("cannot convert to " + t->str(), e);
            return {t, Location::Memory};
        }
        case ExprKind::ExternalCall: {
            const Typed base = type_of(ctx, *e.base, log);
            const FunctionInfo* f = external_target(ctx, base, e);
            note(log, "Type5");
            note(log, "Size6");
            if (!f->ret) return {nullptr, Location::Memory};
            const TypePtr& rt = f->ret->type;
            return {rt->kind() == TypeKind::Ref ? rt->inner() : rt, Location::Memory};
        }
        case ExprKind::LowLevelCall: {
            const Typed base = type_of(ctx, *e.base, log);
            if (!require_value(base, *e.base).is_address_like())
                throw type_error("'.call' requires an address, got " + base.type->str(), e);
            return {SemType::boolean(), Location::Memory};
        }
        case ExprKind::Push:
        case ExprKind::ArrayLength: {
            const Typed base = type_of(ctx, *e.base, log);
            const SemType& inner = deref(require_value(base, *e.base));
            const bool ok = inner.kind() == TypeKind::DynArray ||
                            (e.kind == ExprKind::ArrayLength && inner.kind() == TypeKind::StaticArray);
            if (!ok)
                throw type_error(std::string(e.kind == ExprKind::Push ? "push" : "length") + " on non-array type " +
                                     base.type->str(),
                                 e);
            return {uint256(), Location::Memory};
        }
        case ExprKind::Binary: {
            const Typed l = type_of(ctx, *e.base, log);
            const Typed r = type_of(ctx, *e.index, log);
            require_value(l, *e.base);
            require_value(r, *e.index);
            switch (e.binary_op) {
                case BinaryOp::And:
                case BinaryOp::Or:
                    if (l.type->kind() != TypeKind::Bool || r.type->kind() != TypeKind::Bool)
                        throw type_error("operands of '" + std::string(to_string(e.binary_op)) + "' must be bool", e);
                    return {SemType::boolean(), Location::Memory};
                case BinaryOp::Eq:
                case BinaryOp::Ne: {
                    const bool ok = (integer_like(l) && integer_like(r)) ||
                                    (l.type->is_address_like() && r.type->is_address_like()) ||
                                    (l.type->kind() == TypeKind::Bool && r.type->kind() == TypeKind::Bool) ||
                                    (l.type->kind() == TypeKind::String && r.type->kind() == TypeKind::String);
                    if (!ok) throw type_error("cannot compare " + l.type->str() + " with " + r.type->str(), e);
                    return {SemType::boolean(), Location::Memory};
                }
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge:
                    if (!integer_like(l) || !integer_like(r))
                        throw type_error("ordering comparison needs integer operands", e);
                    return {SemType::boolean(), Location::Memory};
                default:
                    if (!integer_like(l) || !integer_like(r))
                        throw type_error("arithmetic on non-integer operands " + l.type->str() + ", " + r.type->str(), e);
                    return {common_type(l, r), Location::Memory, l.literal && r.literal};
            }
        }
        case ExprKind::Unary: {
            const Typed v = type_of(ctx, *e.base, log);
            require_value(v, *e.base);
            if (e.unary_op == UnaryOp::Not) {
                if (v.type->kind() != TypeKind::Bool) throw type_error("'!' needs a bool operand", e);
                return {SemType::boolean(), Location::Memory};
            }
            if (!integer_like(v)) throw type_error("unary '-' needs an integer operand", e);
            return {v.literal ? SemType::int256() : v.type, Location::Memory};
        }
        case ExprKind::Conditional: {
            const Typed c = type_of(ctx, *e.base, log);
            if (!c.type || c.type->kind() != TypeKind::Bool) throw type_error("condition must be bool", *e.base);
            const Typed a = type_of(ctx, *e.index, log);
            const Typed b = type_of(ctx, *e.alt, log);
            require_value(a, *e.index);
            require_value(b, *e.alt);
            if (integer_like(a) && integer_like(b)) return {common_type(a, b), Location::Memory, a.literal && b.literal};
            if (!assignable(b, *a.type)) throw type_error("branches of '?:' have different types", e);
            return {a.type, a.loc};
        }
        case ExprKind::MsgSender:
            return {SemType::address(), Location::Memory};
        case ExprKind::MsgValue:
        case ExprKind::Balance:
            if (e.kind == ExprKind::Balance) {
                const Typed base = type_of(ctx, *e.base, log);
                if (!require_value(base, *e.base).is_address_like())
                    throw type_error("'.balance' requires an address", e);
            }
            return {uint256(), Location::Memory};
        case ExprKind::This:
            return {SemType::contract(ctx.contract.name), Location::Memory};
    }
    throw Error(ErrorKind::Internal, "type_of: unknown expression kind", e.span);
}

}  // namespace solsem
