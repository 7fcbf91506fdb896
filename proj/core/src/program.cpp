#include "solsem/program.hpp"

#include "solsem/layout.hpp"
#include "solsem/typing.hpp"

#include <algorithm>
#include <set>

namespace solsem {

using namespace ast;

const FunctionInfo* ContractInfo::function(const std::string& fname) const {
    auto it = functions.find(fname);
    return it == functions.end() ? nullptr : &it->second;
}

const StateVarInfo* ContractInfo::state_var(const std::string& vname) const {
    for (const auto& v : state_vars)
        if (v.name == vname) return &v;
    return nullptr;
}

const ContractInfo* Program::contract(const std::string& name) const {
    auto it = contracts_.find(name);
    return it == contracts_.end() ? nullptr : &it->second;
}

TypePtr Program::resolve(const TypeName& tn, const ContractInfo& c) const {
    switch (tn.kind) {
        case TypeName::Kind::Elementary: {
            const std::string& n = tn.name;
            if (n == "uint") return SemType::uint(256);
            if (n == "int" || n == "int256") return SemType::int256();
            if (n == "bool") return SemType::boolean();
            if (n == "address") return SemType::address();
            if (n == "string") return SemType::string();
            if (n.rfind("uint", 0) == 0) return SemType::uint(static_cast<unsigned>(std::stoul(n.substr(4))));
            if (n == "var") throw Error(ErrorKind::TypeError, "'var' is not a type here", tn.span);
            throw Error(ErrorKind::UnsupportedFeature, "unsupported feature: type " + n, tn.span);
        }
        case TypeName::Kind::UserDefined: {
            if (auto it = c.structs.find(tn.name); it != c.structs.end()) return it->second;
            if (contracts_.count(tn.name) || unit_->find_contract(tn.name)) return SemType::contract(tn.name);
            throw Error(ErrorKind::UnknownIdentifier, "unknown type '" + tn.name + "'", tn.span);
        }
        case TypeName::Kind::Array: {
            TypePtr elem = resolve(*tn.elem, c);
            if (!tn.length) return SemType::dyn_array(std::move(elem));
            if (*tn.length <= 0 || *tn.length > BigInt(1) << 32)
                throw Error(ErrorKind::UnsizedType, "array length " + tn.length->str() + " out of range", tn.span);
            return SemType::static_array(std::move(elem), static_cast<std::uint64_t>(*tn.length));
        }
        case TypeName::Kind::Mapping:
            return SemType::mapping(resolve(*tn.key, c), resolve(*tn.elem, c));
    }
    throw Error(ErrorKind::Internal, "resolve: unknown type name kind", tn.span);
}

TypePtr Program::binding_type(const TypeName& tn, DataLocation loc, bool is_param, const ContractInfo& c) const {
    TypePtr t = resolve(tn, c);
    switch (t->kind()) {
        case TypeKind::StaticArray:
        case TypeKind::Struct:
        case TypeKind::DynArray:
        case TypeKind::Mapping: {
            Location where = is_param ? Location::Memory : Location::Storage;
            if (loc == DataLocation::Storage) where = Location::Storage;
            if (loc == DataLocation::Memory) where = Location::Memory;
            if (where == Location::Memory && t->kind() == TypeKind::DynArray)
                throw Error(ErrorKind::UnsupportedFeature, "unsupported feature: dynamic arrays in memory", tn.span);
            if (where == Location::Memory && t->kind() == TypeKind::Mapping)
                throw Error(ErrorKind::TypeError, "mappings can only live in storage", tn.span);
            return SemType::ref(std::move(t), where);
        }
        default:
            if (loc != DataLocation::Default)
                throw Error(ErrorKind::TypeError, "data location can only be given for reference types", tn.span);
            return t;
    }
}

class ProgramBuilder {
public:
    explicit ProgramBuilder(Program& p) : p_(p) {}

    void run() {
        for (const auto& c : p_.unit_->contracts) {
            ContractInfo info;
            info.name = c.name;
            info.def = &c;
            p_.contracts_.emplace(c.name, std::move(info));
        }
        for (auto& [name, info] : p_.contracts_) resolve_structs(info);
        for (auto& [name, info] : p_.contracts_) {
            for (const auto& v : info.def->state_vars) {
                TypePtr t = p_.resolve(*v.type, info);
                size_of(*t);  // rejects layouts too large to address
                info.state_vars.push_back(StateVarInfo{v.name, std::move(t), v.init, v.span});
            }
            for (const auto& f : info.def->functions) {
                FunctionInfo fi = function_info(info, f);
                if (f.kind == FunctionKind::Constructor) info.constructor = std::move(fi);
                else if (f.kind == FunctionKind::Fallback) info.fallback = std::move(fi);
                else info.functions.emplace(f.name, std::move(fi));
            }
        }
        for (const auto& [name, info] : p_.contracts_) check_contract(info);
    }

private:
    void resolve_structs(ContractInfo& info) {
        std::set<std::string> visiting;
        for (const auto& s : info.def->structs) resolve_struct(info, s.name, visiting);
    }

    TypePtr resolve_struct(ContractInfo& info, const std::string& name, std::set<std::string>& visiting) {
        if (auto it = info.structs.find(name); it != info.structs.end()) return it->second;
        const StructDef* def = nullptr;
        for (const auto& s : info.def->structs)
            if (s.name == name) def = &s;
        if (!def) return nullptr;
        if (!visiting.insert(name).second)
            throw Error(ErrorKind::UnsizedType, "struct " + name + " contains itself", def->span);
        // Resolve field struct types first so that resolve() finds them.
        for (const auto& f : def->fields) {
            const TypeName* tn = f.type.get();
            while (tn->kind == TypeName::Kind::Array) tn = tn->elem.get();
            if (tn->kind == TypeName::Kind::UserDefined) resolve_struct(info, tn->name, visiting);
        }
        std::vector<StructField> fields;
        std::set<std::string> seen;
        for (const auto& f : def->fields) {
            if (!seen.insert(f.name).second)
                throw Error(ErrorKind::DuplicateDeclaration, "duplicate member '" + f.name + "'", f.span);
            fields.push_back(StructField{f.name, p_.resolve(*f.type, info)});
        }
        TypePtr t = SemType::structure(name, std::move(fields));
        visiting.erase(name);
        info.structs.emplace(name, t);
        return t;
    }

    static bool is_guard_modifier(const ModifierDef& m, ExprPtr& cond) {
        if (!m.params.empty() || m.body->body.size() != 1) return false;
        const Stmt& s = *m.body->body.front();
        if (s.kind != StmtKind::If || s.else_branch) return false;
        const Stmt* then = s.then_branch.get();
        if (then->kind == StmtKind::Block && then->body.size() == 1) then = then->body.front().get();
        if (then->kind != StmtKind::Placeholder) return false;
        cond = s.expr;
        return true;
    }

    /// Replaces each `_;` in `s` with `inner`.
    static StmtPtr substitute(const StmtPtr& s, const StmtPtr& inner) {
        if (!s) return s;
        if (s->kind == StmtKind::Placeholder) return inner;
        auto copy = std::make_shared<Stmt>(*s);
        copy->then_branch = substitute(s->then_branch, inner);
        copy->else_branch = substitute(s->else_branch, inner);
        for (auto& b : copy->body) b = substitute(b, inner);
        return copy;
    }

    FunctionInfo function_info(const ContractInfo& c, const FunctionDef& f) {
        FunctionInfo fi;
        fi.name = f.kind == FunctionKind::Fallback ? "" : f.name;
        fi.kind = f.kind;
        fi.def = &f;
        fi.payable = std::find(f.specifiers.begin(), f.specifiers.end(), "payable") != f.specifiers.end();
        std::set<std::string> names;
        for (const auto& prm : f.params) {
            if (!prm.name.empty() && !names.insert(prm.name).second)
                throw Error(ErrorKind::DuplicateDeclaration, "duplicate parameter '" + prm.name + "'", prm.span);
            fi.params.push_back(ParamInfo{prm.name, p_.binding_type(*prm.type, prm.location, true, c), prm.span});
        }
        if (!f.returns.empty()) {
            const Param& r = f.returns.front();
            if (!r.name.empty() && names.count(r.name))
                throw Error(ErrorKind::DuplicateDeclaration, "duplicate parameter '" + r.name + "'", r.span);
            // An unnamed return variable is still declared (E-FUN's p_r);
            // it gets a name no identifier can spell.
            fi.ret = ParamInfo{r.name.empty() ? "$return" : r.name, p_.binding_type(*r.type, r.location, true, c), r.span};
        }

        StmtPtr body = f.body;
        ExprPtr guard;
        for (auto it = f.modifiers.rbegin(); it != f.modifiers.rend(); ++it) {
            const ModifierDef* m = nullptr;
            for (const auto& md : c.def->modifiers)
                if (md.name == it->name) m = &md;
            if (!m) throw Error(ErrorKind::UnknownIdentifier, "unknown modifier '" + it->name + "'", it->span);
            if (m->params.size() != it->args.size())
                throw Error(ErrorKind::TypeError,
                            "modifier '" + m->name + "' expects " + std::to_string(m->params.size()) + " arguments",
                            it->span);
            ExprPtr cond;
            if (is_guard_modifier(*m, cond)) {
                guard = guard ? make_binary(BinaryOp::And, cond, guard, it->span) : cond;
                continue;
            }
            std::vector<StmtPtr> stmts;
            for (std::size_t i = 0; i < m->params.size(); ++i) {
                auto decl = std::make_shared<Stmt>();
                decl->kind = StmtKind::VarDecl;
                decl->span = m->params[i].span;
                decl->type = m->params[i].type;
                decl->location = m->params[i].location == DataLocation::Default ? DataLocation::Memory
                                                                                  : m->params[i].location;
                if (decl->location == DataLocation::Memory && p_.resolve(*decl->type, c)->is_primitive())
                    decl->location = DataLocation::Default;
                decl->name = m->params[i].name;
                decl->expr = it->args[i];
                stmts.push_back(decl);
            }
            stmts.push_back(substitute(m->body, body));
            body = make_block(std::move(stmts), m->span);
        }
        // Guard conditions of outer modifiers are evaluated first.
        fi.guard = guard;
        fi.body = body;
        return fi;
    }

    // ---- static checker ----------------------------------------------

    struct FnScope {
        std::map<std::string, TypePtr> locals;
        const FunctionInfo* fn = nullptr;
    };

    TypeContext context(const ContractInfo& c, const FnScope* scope) {
        LocalLookup lookup;
        if (scope) {
            lookup = [scope](const std::string& n) -> TypePtr {
                auto it = scope->locals.find(n);
                return it == scope->locals.end() ? nullptr : it->second;
            };
        }
        return TypeContext{p_, c, lookup};
    }

    void check_contract(const ContractInfo& c) {
        for (const auto& v : c.state_vars) {
            if (!v.init) continue;
            const Typed t = check_expr(c, nullptr, *v.init);
            require_assignable(t, *v.type, *v.init);
        }
        if (c.constructor) check_function(c, *c.constructor);
        if (c.fallback) check_function(c, *c.fallback);
        for (const auto& [name, f] : c.functions) check_function(c, f);
    }

    void check_function(const ContractInfo& c, const FunctionInfo& f) {
        FnScope scope;
        scope.fn = &f;
        for (const auto& prm : f.params)
            if (!prm.name.empty()) scope.locals[prm.name] = prm.type;
        if (f.ret) scope.locals[f.ret->name] = f.ret->type;
        if (f.guard) {
            const Typed g = check_expr(c, &scope, *f.guard);
            if (!g.type || g.type->kind() != TypeKind::Bool)
                throw Error(ErrorKind::TypeError, "modifier condition must be bool", f.guard->span);
        }
        check_stmt(c, scope, *f.body);
    }

    Typed check_expr(const ContractInfo& c, const FnScope* scope, const Expr& e) {
        const TypeContext ctx = context(c, scope);
        Typed t = type_of(ctx, e);
        check_calls(c, scope, e);
        return t;
    }

    /// Arity and argument types for calls anywhere inside `e`.
    void check_calls(const ContractInfo& c, const FnScope* scope, const Expr& e) {
        const TypeContext ctx = context(c, scope);
        auto check_args = [&](const FunctionInfo& f, const std::vector<ExprPtr>& args, const Expr& site) {
            if (f.params.size() != args.size())
                throw Error(ErrorKind::TypeError,
                            "function '" + f.name + "' expects " + std::to_string(f.params.size()) + " arguments, got " +
                                std::to_string(args.size()),
                            site.span);
            for (std::size_t i = 0; i < args.size(); ++i) {
                const Typed at = type_of(ctx, *args[i]);
                require_assignable(at, *f.params[i].type, *args[i]);
            }
        };
        switch (e.kind) {
            case ExprKind::Call:
                if (const FunctionInfo* f = c.function(e.name)) {
                    check_args(*f, e.args, e);
                } else if (e.args.size() != 1) {
                    throw Error(ErrorKind::TypeError, "contract conversion takes exactly one argument", e.span);
                } else if (!type_of(ctx, *e.args[0]).type || !type_of(ctx, *e.args[0]).type->is_address_like()) {
                    throw Error(ErrorKind::TypeError, "contract conversion needs an address", e.span);
                }
                break;
            case ExprKind::ExternalCall: {
                const Typed base = type_of(ctx, *e.base);
                const ContractInfo* callee = p_.contract(base.type->name());
                check_args(*callee->function(e.name), e.args, e);
                break;
            }
            case ExprKind::Push: {
                const SemType& arr = deref(*type_of(ctx, *e.base).type);
                require_assignable(type_of(ctx, *e.args[0]), *arr.elem(), *e.args[0]);
                break;
            }
            case ExprKind::TypeConv: {
                const Typed from = type_of(ctx, *e.args[0]);
                if (!from.type || !from.type->is_primitive())
                    throw Error(ErrorKind::TypeError, "cannot convert a non-primitive value", e.span);
                break;
            }
            default:
                break;
        }
        for (const ExprPtr* sub : {&e.base, &e.index, &e.alt, &e.value_expr, &e.gas_expr})
            if (*sub) check_calls(c, scope, **sub);
        for (const auto& a : e.args) check_calls(c, scope, *a);
        if (e.value_expr || e.gas_expr) {
            for (const ExprPtr* sub : {&e.value_expr, &e.gas_expr}) {
                if (!*sub) continue;
                const Typed t = type_of(ctx, **sub);
                if (!t.type || !t.type->is_integer())
                    throw Error(ErrorKind::TypeError, "call option must be an integer", (*sub)->span);
            }
        }
    }

    static void require_assignable(const Typed& from, const SemType& to, const Expr& e) {
        if (!from.type) throw Error(ErrorKind::TypeError, "expression has no value", e.span);
        if (to.kind() == TypeKind::DynArray || to.kind() == TypeKind::Mapping)
            throw Error(ErrorKind::UnsupportedFeature,
                        "unsupported feature: copying a value of type " + to.str(), e.span);
        if (!assignable(from, to))
            throw Error(ErrorKind::TypeError, "cannot assign " + from.type->str() + " to " + to.str(), e.span);
    }

    void check_stmt(const ContractInfo& c, FnScope& scope, const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Block:
                for (const auto& b : s.body) check_stmt(c, scope, *b);
                return;
            case StmtKind::Placeholder:
                return;
            case StmtKind::VarDecl: {
                TypePtr t;
                if (s.type) {
                    t = p_.binding_type(*s.type, s.location, false, c);
                } else {
                    const Typed init = check_expr(c, &scope, *s.expr);
                    if (!init.type) throw Error(ErrorKind::TypeError, "cannot infer type from a void call", s.span);
                    t = init.literal ? SemType::uint(256) : init.type;
                }
                if (s.expr) {
                    const Typed init = check_expr(c, &scope, *s.expr);
                    const SemType& target = t->kind() == TypeKind::Ref && t->pointee() == Location::Storage
                                                ? *t
                                                : deref(*t);
                    if (t->kind() == TypeKind::Ref && t->pointee() == Location::Storage) {
                        // A storage pointer must be initialized from storage.
                        if (!init.type || !same_type(deref(*init.type), *t->inner()) ||
                            (init.type->kind() != TypeKind::Ref && init.loc != Location::Storage) ||
                            (init.type->kind() == TypeKind::Ref && init.type->pointee() != Location::Storage))
                            throw Error(ErrorKind::TypeError,
                                        "storage pointer '" + s.name + "' must be initialized from a storage " +
                                            t->inner()->str(),
                                        s.expr->span);
                    } else {
                        require_assignable(init, target, *s.expr);
                    }
                } else if (t->kind() == TypeKind::Ref && t->pointee() == Location::Storage) {
                    Diagnostic d;
                    d.severity = Diagnostic::Severity::Warning;
                    d.kind = ErrorKind::TypeError;
                    d.span = s.span;
                    d.message = "uninitialized storage pointer '" + s.name + "' aliases storage slot 0";
                    p_.warnings_.push_back(std::move(d));
                }
                if (auto it = scope.locals.find(s.name); it != scope.locals.end() && !same_type(*it->second, *t))
                    throw Error(ErrorKind::DuplicateDeclaration, "'" + s.name + "' is already declared", s.span);
                scope.locals[s.name] = t;
                return;
            }
            case StmtKind::Assign: {
                const Typed rhs = check_expr(c, &scope, *s.expr);
                const Typed lhs = check_expr(c, &scope, *s.target);
                if (!is_lvalue(*s.target))
                    throw Error(ErrorKind::TypeError, "expression is not assignable", s.target->span);
                if (!lhs.type) throw Error(ErrorKind::TypeError, "expression is not assignable", s.target->span);
                require_assignable(rhs, *lhs.type, *s.expr);
                return;
            }
            case StmtKind::If:
            case StmtKind::While: {
                const Typed cond = check_expr(c, &scope, *s.expr);
                if (!cond.type || cond.type->kind() != TypeKind::Bool)
                    throw Error(ErrorKind::TypeError, "condition must be bool", s.expr->span);
                check_stmt(c, scope, *s.then_branch);
                if (s.else_branch) check_stmt(c, scope, *s.else_branch);
                return;
            }
            case StmtKind::Return: {
                if (!s.expr) return;
                const Typed v = check_expr(c, &scope, *s.expr);
                if (!scope.fn->ret)
                    throw Error(ErrorKind::TypeError, "function '" + scope.fn->name + "' does not return a value",
                                s.span);
                require_assignable(v, deref(*scope.fn->ret->type), *s.expr);
                return;
            }
            case StmtKind::ExprStmt:
                check_expr(c, &scope, *s.expr);
                return;
        }
    }

    static bool is_lvalue(const Expr& e) {
        return e.kind == ExprKind::Ident || e.kind == ExprKind::Index || e.kind == ExprKind::Member;
    }

    Program& p_;
};

std::shared_ptr<const Program> Program::build(SourceUnit unit) {
    auto p = std::make_shared<Program>();
    p->unit_ = std::make_shared<SourceUnit>(std::move(unit));
    ProgramBuilder(*p).run();
    return p;
}

std::shared_ptr<const Program> Program::from_source(std::string_view source, const ParseOptions& opts) {
    ParseResult r = parse(source, opts);
    for (const auto& d : r.diagnostics)
        if (d.severity == Diagnostic::Severity::Error) throw Error(d.kind, d.message, d.span);
    return build(std::move(r.unit));
}

}  // namespace solsem
