#include "solsem/parser.hpp"

#include "lexer.hpp"

#include <set>

namespace solsem {

using namespace ast;
using detail::Tok;
using detail::Token;

std::string Diagnostic::format(std::string_view file) const {
    std::string out(file);
    out += ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": ";
    out += severity == Severity::Warning ? "warning: " : "error: ";
    out += message;
    return out;
}

bool ParseResult::ok() const {
    for (const auto& d : diagnostics)
        if (d.severity == Diagnostic::Severity::Error) return false;
    return true;
}

namespace {

/// Thrown for constructs outside the supported subset.
Error unsupported(const std::string& feature, Span span) {
    return Error(ErrorKind::UnsupportedFeature, "unsupported feature: " + feature, span);
}

const std::set<std::string, std::less<>> kSpecifiers = {
    "public", "private", "internal", "external", "payable", "constant", "view", "pure",
};

bool is_uint_name(std::string_view s) { return s.substr(0, 4) == "uint"; }
bool is_int_name(std::string_view s) { return s.substr(0, 3) == "int"; }

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

/// Elementary type keywords of the supported subset plus the ones that exist
/// in Solidity but are rejected as unsupported.
bool is_elementary_keyword(std::string_view s) {
    if (s == "bool" || s == "address" || s == "string" || s == "var" || s == "byte" || s == "bytes" ||
        s == "fixed" || s == "ufixed")
        return true;
    if (s == "uint" || s == "int") return true;
    if (is_uint_name(s) && all_digits(s.substr(4))) return true;
    if (is_int_name(s) && all_digits(s.substr(3))) return true;
    if (s.substr(0, 5) == "bytes" && all_digits(s.substr(5))) return true;
    if ((s.substr(0, 5) == "fixed" || s.substr(0, 6) == "ufixed") && s.find('x') != std::string_view::npos) return true;
    return false;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const ParseOptions& opts) : toks_(std::move(toks)), opts_(opts) {}

    SourceUnit source_unit() {
        SourceUnit unit;
        while (!at_end()) {
            if (peek().ident("pragma")) {
                while (!at_end() && !peek().punct(";")) ++pos_;
                expect_punct(";");
                continue;
            }
            if (peek().ident("import")) throw unsupported("import", peek().span);
            if (peek().ident("library")) throw unsupported("library", peek().span);
            if (peek().ident("interface")) throw unsupported("interface", peek().span);
            if (peek().ident("contract")) {
                unit.contracts.push_back(contract());
                continue;
            }
            throw syntax_error({"contract", "pragma"});
        }
        return unit;
    }

    ExprPtr standalone_expression() {
        auto e = expression();
        if (!at_end()) throw syntax_error({"end of expression"});
        return e;
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    bool at_end() const { return peek().kind == Tok::End; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    bool accept_punct(std::string_view p) {
        if (peek().punct(p)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_ident(std::string_view p) {
        if (peek().ident(p)) {
            ++pos_;
            return true;
        }
        return false;
    }
    const Token& expect_punct(std::string_view p) {
        if (!peek().punct(p)) throw syntax_error({std::string(p)});
        return next();
    }
    std::string expect_identifier() {
        if (peek().kind != Tok::Ident) throw syntax_error({"identifier"});
        return next().text;
    }

    Error syntax_error(std::vector<std::string> expected) const {
        const Token& t = peek();
        std::string msg = "syntax error: expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += "'" + expected[i] + "'";
        }
        msg += t.kind == Tok::End ? " before end of input" : ", found '" + t.text + "'";
        last_expected_ = std::move(expected);
        return Error(ErrorKind::SyntaxError, msg, t.span);
    }

    void reject_unsupported_punct() const {
        const Token& t = peek();
        if (t.kind != Tok::Punct) return;
        static const std::set<std::string, std::less<>> bitwise = {"&", "|", "^", "~", "<<", ">>",
                                                                   "&=", "|=", "^=", "<<=", ">>="};
        if (bitwise.contains(t.text)) throw unsupported("bitwise operations", t.span);
        if (t.text == "**") throw unsupported("exponentiation", t.span);
    }

    // ---- contracts -----------------------------------------------------

    ContractDef contract() {
        ContractDef c;
        c.span = next().span;  // 'contract'
        c.name = expect_identifier();
        if (peek().ident("is")) throw unsupported("inheritance", peek().span);
        expect_punct("{");
        contract_name_ = c.name;
        while (!accept_punct("}")) {
            if (at_end()) throw syntax_error({"}"});
            contract_part(c);
        }
        return c;
    }

    void contract_part(ContractDef& c) {
        const Token& t = peek();
        if (t.ident("struct")) return c.structs.push_back(struct_def());
        if (t.ident("modifier")) return c.modifiers.push_back(modifier_def());
        if (t.ident("function")) return c.functions.push_back(function_def(false));
        if (t.ident("event") || t.ident("emit")) throw unsupported("events", t.span);
        if (t.ident("using")) throw unsupported("using for", t.span);
        if (t.ident("enum")) throw unsupported("enum", t.span);
        if (t.ident("constructor") || t.ident("fallback") || t.ident("receive")) {
            if (!opts_.modern_syntax)
                throw unsupported("'" + t.text + "' keyword (pre-0.5 dialect expected; enable modern syntax)", t.span);
            return c.functions.push_back(function_def(true));
        }
        c.state_vars.push_back(state_var());
    }

    StructDef struct_def() {
        StructDef s;
        s.span = next().span;
        s.name = expect_identifier();
        expect_punct("{");
        while (!accept_punct("}")) {
            Param p;
            p.span = peek().span;
            p.type = type_name();
            p.name = expect_identifier();
            expect_punct(";");
            s.fields.push_back(std::move(p));
        }
        return s;
    }

    ModifierDef modifier_def() {
        ModifierDef m;
        m.span = next().span;
        m.name = expect_identifier();
        if (peek().punct("(")) m.params = parameter_list();
        in_modifier_ = true;
        m.body = block();
        in_modifier_ = false;
        return m;
    }

    FunctionDef function_def(bool modern) {
        FunctionDef f;
        f.span = peek().span;
        const Token& head = next();
        if (modern) {
            if (head.text == "constructor") {
                f.kind = FunctionKind::Constructor;
                f.name = contract_name_;
            } else if (head.text == "fallback") {
                f.kind = FunctionKind::Fallback;
            } else {
                throw unsupported("receive function", head.span);
            }
        } else if (peek().kind == Tok::Ident) {
            f.name = next().text;
            if (f.name == contract_name_) f.kind = FunctionKind::Constructor;
        } else {
            f.kind = FunctionKind::Fallback;
        }
        f.params = parameter_list();
        if (f.kind == FunctionKind::Fallback && !f.params.empty())
            throw Error(ErrorKind::SyntaxError, "fallback function cannot take parameters", f.span);
        for (;;) {
            const Token& t = peek();
            if (t.kind != Tok::Ident) break;
            if (kSpecifiers.contains(t.text)) {
                f.specifiers.push_back(next().text);
            } else if (t.text == "returns") {
                next();
                f.returns = parameter_list();
                if (f.returns.size() > 1)
                    throw unsupported("multiple return values", t.span);
            } else {
                ModifierInvocation inv;
                inv.span = t.span;
                inv.name = next().text;
                if (accept_punct("(")) inv.args = call_arguments();
                f.modifiers.push_back(std::move(inv));
            }
        }
        if (peek().punct(";")) throw unsupported("functions without a body", peek().span);
        f.body = block();
        return f;
    }

    std::vector<Param> parameter_list() {
        std::vector<Param> out;
        expect_punct("(");
        if (accept_punct(")")) return out;
        do {
            Param p;
            p.span = peek().span;
            p.type = type_name();
            p.location = data_location();
            if (peek().kind == Tok::Ident) p.name = next().text;
            out.push_back(std::move(p));
        } while (accept_punct(","));
        expect_punct(")");
        return out;
    }

    DataLocation data_location() {
        if (accept_ident("storage")) return DataLocation::Storage;
        if (accept_ident("memory")) return DataLocation::Memory;
        if (peek().ident("calldata")) throw unsupported("calldata location", peek().span);
        return DataLocation::Default;
    }

    StateVarDecl state_var() {
        StateVarDecl v;
        v.span = peek().span;
        v.type = type_name();
        if (v.type->kind == TypeName::Kind::Elementary && v.type->name == "var")
            throw Error(ErrorKind::SyntaxError, "'var' is not allowed for state variables", v.span);
        while (peek().kind == Tok::Ident && kSpecifiers.contains(peek().text)) v.specifiers.push_back(next().text);
        v.name = expect_identifier();
        if (accept_punct("=")) v.init = expression();
        expect_punct(";");
        return v;
    }

    // ---- types ---------------------------------------------------------

    TypeNamePtr type_name() {
        auto base = std::make_shared<TypeName>();
        base->span = peek().span;
        const Token& t = peek();
        if (t.ident("mapping")) {
            next();
            expect_punct("(");
            base->kind = TypeName::Kind::Mapping;
            base->key = type_name();
            expect_punct("=>");
            base->elem = type_name();
            expect_punct(")");
        } else if (t.ident("function")) {
            throw unsupported("function types", t.span);
        } else if (t.kind == Tok::Ident) {
            base->name = next().text;
            base->kind = is_elementary_keyword(base->name) ? TypeName::Kind::Elementary : TypeName::Kind::UserDefined;
            if (base->kind == TypeName::Kind::Elementary) check_elementary(base->name, base->span);
        } else {
            throw syntax_error({"type name"});
        }
        TypeNamePtr result = base;
        while (peek().punct("[")) {
            auto arr = std::make_shared<TypeName>();
            arr->span = next().span;
            arr->kind = TypeName::Kind::Array;
            arr->elem = result;
            if (!accept_punct("]")) {
                const Token& n = peek();
                if (n.kind == Tok::Number) {
                    arr->length = parse_integer(next().text);
                } else if (n.kind == Tok::HexNumber) {
                    throw unsupported("hex literals", n.span);
                } else {
                    throw syntax_error({"array length literal", "]"});
                }
                expect_punct("]");
            }
            result = arr;
        }
        return result;
    }

    static void check_elementary(const std::string& n, Span span) {
        if (n == "byte" || n == "bytes" || n.substr(0, 5) == "bytes") throw unsupported("byte types", span);
        if (n.find("fixed") != std::string::npos) throw unsupported("fixed-point types", span);
        if (n == "uint" || n == "int" || n == "int256") return;
        if (is_uint_name(n)) {
            const unsigned bits = static_cast<unsigned>(std::stoul(n.substr(4)));
            if (bits < 8 || bits > 256 || (bits & (bits - 1)) != 0) throw unsupported("uint size " + n.substr(4), span);
            return;
        }
        if (is_int_name(n)) throw unsupported("int size " + n.substr(3), span);
    }

    // ---- statements ----------------------------------------------------

    StmtPtr block() {
        const Span span = expect_punct("{").span;
        std::vector<StmtPtr> body;
        while (!accept_punct("}")) {
            if (at_end()) throw syntax_error({"}"});
            body.push_back(statement());
        }
        return make_block(std::move(body), span);
    }

    StmtPtr statement() {
        const Token& t = peek();
        if (t.punct("{")) return block();
        if (t.ident("if")) return if_statement();
        if (t.ident("while")) return while_statement();
        if (t.ident("for")) return for_statement();
        if (t.ident("do")) return do_while_statement();
        if (t.ident("return")) return return_statement();
        if (t.ident("continue")) throw unsupported("continue", t.span);
        if (t.ident("break")) throw unsupported("break", t.span);
        if (t.ident("throw")) throw unsupported("throw", t.span);
        if (t.ident("assembly")) throw unsupported("assembly", t.span);
        if (t.ident("emit")) throw unsupported("events", t.span);
        if (t.ident("_") && peek(1).punct(";")) {
            if (!in_modifier_)
                throw Error(ErrorKind::SyntaxError, "placeholder '_;' is only allowed inside a modifier body", t.span);
            next();
            next();
            auto s = std::make_shared<Stmt>();
            s->kind = StmtKind::Placeholder;
            s->span = t.span;
            return s;
        }
        auto s = simple_statement();
        expect_punct(";");
        return s;
    }

    /// Variable declaration, assignment, increment or expression statement;
    /// no trailing ';'.
    StmtPtr simple_statement() {
        if (auto decl = try_var_decl()) return decl;
        const Span span = peek().span;
        if (peek().punct("++") || peek().punct("--")) {
            const bool inc = next().text == "++";
            auto target = postfix_expression();
            return increment(target, inc, span);
        }
        auto lhs = expression();
        reject_unsupported_punct();
        const Token& t = peek();
        if (t.kind == Tok::Punct) {
            if (t.text == "=") {
                next();
                return assign(lhs, expression(), span);
            }
            static const std::pair<std::string_view, BinaryOp> compound[] = {
                {"+=", BinaryOp::Add}, {"-=", BinaryOp::Sub}, {"*=", BinaryOp::Mul},
                {"/=", BinaryOp::Div}, {"%=", BinaryOp::Mod},
            };
            for (const auto& [text, op] : compound) {
                if (t.text == text) {
                    next();
                    auto rhs = expression();
                    return assign(lhs, make_binary(op, lhs, rhs, span), span);
                }
            }
            if (t.text == "++" || t.text == "--") {
                const bool inc = next().text == "++";
                return increment(lhs, inc, span);
            }
        }
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::ExprStmt;
        s->expr = lhs;
        s->span = span;
        return s;
    }

    static StmtPtr assign(ExprPtr target, ExprPtr value, Span span) {
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::Assign;
        s->target = std::move(target);
        s->expr = std::move(value);
        s->span = span;
        return s;
    }

    static StmtPtr increment(const ExprPtr& target, bool inc, Span span) {
        return assign(target, make_binary(inc ? BinaryOp::Add : BinaryOp::Sub, target, make_int(1, span), span), span);
    }

    /// Declarations and expressions share prefixes (`a[1]` vs `uint[1] a`);
    /// try the declaration reading first and backtrack on failure.
    StmtPtr try_var_decl() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) return nullptr;
        const bool keyword_type = is_elementary_keyword(t.text) || t.text == "mapping";
        if (keyword_type && t.text != "mapping" && peek(1).punct("(")) return nullptr;  // conversion such as uint(x)
        const std::size_t save = pos_;
        try {
            auto s = std::make_shared<Stmt>();
            s->kind = StmtKind::VarDecl;
            s->span = t.span;
            auto type = type_name();
            s->location = data_location();
            if (peek().kind != Tok::Ident) throw syntax_error({"identifier"});
            s->name = next().text;
            if (!peek().punct("=") && !peek().punct(";")) throw syntax_error({"=", ";"});
            if (type->kind == TypeName::Kind::Elementary && type->name == "var") type = nullptr;
            s->type = type;
            if (accept_punct("=")) s->expr = expression();
            if (!s->type && !s->expr) throw Error(ErrorKind::SyntaxError, "'var' declaration needs an initializer", s->span);
            return s;
        } catch (const Error& e) {
            if (keyword_type || e.kind() == ErrorKind::UnsupportedFeature) throw;
            pos_ = save;
            return nullptr;
        }
    }

    StmtPtr if_statement() {
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::If;
        s->span = next().span;
        expect_punct("(");
        s->expr = expression();
        expect_punct(")");
        s->then_branch = statement();
        if (accept_ident("else")) s->else_branch = statement();
        return s;
    }

    StmtPtr while_statement() {
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::While;
        s->span = next().span;
        expect_punct("(");
        s->expr = expression();
        expect_punct(")");
        s->then_branch = statement();
        return s;
    }

    /// for (init; cond; post) body  =>  { init; while (cond) { body post; } }
    StmtPtr for_statement() {
        const Span span = next().span;
        expect_punct("(");
        StmtPtr init;
        if (!accept_punct(";")) {
            init = simple_statement();
            expect_punct(";");
        }
        ExprPtr cond;
        if (!peek().punct(";")) cond = expression();
        expect_punct(";");
        StmtPtr post;
        if (!peek().punct(")")) post = simple_statement();
        expect_punct(")");
        auto body = statement();

        if (!cond) {
            auto t = std::make_shared<Expr>();
            t->kind = ExprKind::BoolLit;
            t->bool_value = true;
            t->span = span;
            cond = t;
        }
        std::vector<StmtPtr> loop_body{body};
        if (post) loop_body.push_back(post);
        auto loop = std::make_shared<Stmt>();
        loop->kind = StmtKind::While;
        loop->span = span;
        loop->expr = cond;
        loop->then_branch = make_block(std::move(loop_body), span);
        std::vector<StmtPtr> outer;
        if (init) outer.push_back(init);
        outer.push_back(loop);
        return make_block(std::move(outer), span);
    }

    /// do body while (cond);  =>  { body while (cond) body }
    StmtPtr do_while_statement() {
        const Span span = next().span;
        auto body = statement();
        if (!accept_ident("while")) throw syntax_error({"while"});
        expect_punct("(");
        auto cond = expression();
        expect_punct(")");
        expect_punct(";");
        auto loop = std::make_shared<Stmt>();
        loop->kind = StmtKind::While;
        loop->span = span;
        loop->expr = cond;
        loop->then_branch = body;
        return make_block({body, loop}, span);
    }

    StmtPtr return_statement() {
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::Return;
        s->span = next().span;
        if (!peek().punct(";")) s->expr = expression();
        expect_punct(";");
        return s;
    }

    // ---- expressions ---------------------------------------------------

    ExprPtr expression() { return conditional(); }

    ExprPtr conditional() {
        auto cond = logical_or();
        if (!peek().punct("?")) return cond;
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Conditional;
        e->span = next().span;
        e->base = cond;
        e->index = expression();
        expect_punct(":");
        e->alt = expression();
        return e;
    }

    template <typename Sub>
    ExprPtr binary_level(Sub sub, std::initializer_list<std::pair<std::string_view, BinaryOp>> ops) {
        auto lhs = (this->*sub)();
        for (;;) {
            reject_unsupported_punct();
            bool matched = false;
            for (const auto& [text, op] : ops) {
                if (peek().punct(text)) {
                    const Span span = next().span;
                    auto rhs = (this->*sub)();
                    lhs = make_binary(op, lhs, rhs, span);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr logical_or() { return binary_level(&Parser::logical_and, {{"||", BinaryOp::Or}}); }
    ExprPtr logical_and() { return binary_level(&Parser::equality, {{"&&", BinaryOp::And}}); }
    ExprPtr equality() { return binary_level(&Parser::relational, {{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}); }
    ExprPtr relational() {
        return binary_level(&Parser::additive, {{"<=", BinaryOp::Le},
                                                {">=", BinaryOp::Ge},
                                                {"<", BinaryOp::Lt},
                                                {">", BinaryOp::Gt}});
    }
    ExprPtr additive() { return binary_level(&Parser::multiplicative, {{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}); }
    ExprPtr multiplicative() {
        return binary_level(&Parser::unary, {{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Mod}});
    }

    ExprPtr unary() {
        reject_unsupported_punct();
        const Token& t = peek();
        if (t.punct("!") || t.punct("-")) {
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Unary;
            e->unary_op = t.text == "!" ? UnaryOp::Not : UnaryOp::Neg;
            e->span = next().span;
            e->base = unary();
            return e;
        }
        if (t.punct("++") || t.punct("--"))
            throw unsupported("increment/decrement inside expressions", t.span);
        if (t.ident("delete")) throw unsupported("delete", t.span);
        if (t.ident("new")) throw unsupported("contract creation with new", t.span);
        return postfix_expression();
    }

    ExprPtr postfix_expression() {
        auto e = primary();
        for (;;) {
            if (peek().punct("[")) {
                auto idx = std::make_shared<Expr>();
                idx->kind = ExprKind::Index;
                idx->span = next().span;
                idx->base = e;
                idx->index = expression();
                expect_punct("]");
                e = idx;
            } else if (peek().punct(".")) {
                e = member(e);
            } else if (peek().punct("(")) {
                if (e->kind != ExprKind::Ident)
                    throw Error(ErrorKind::SyntaxError, "only named functions can be called", peek().span);
                auto call = std::make_shared<Expr>();
                call->kind = ExprKind::Call;
                call->span = e->span;
                call->name = e->name;
                next();
                call->args = call_arguments();
                e = call;
            } else {
                return e;
            }
        }
    }

    /// Parses the arguments after an opening '(' up to and including ')'.
    std::vector<ExprPtr> call_arguments() {
        std::vector<ExprPtr> args;
        if (accept_punct(")")) return args;
        if (peek().punct("{")) throw unsupported("named arguments", peek().span);
        do {
            args.push_back(expression());
        } while (accept_punct(","));
        expect_punct(")");
        return args;
    }

    /// Parses `.value(E)` / `.gas(E)` options in either order.
    void call_options(Expr& e) {
        while (peek().punct(".") && (peek(1).ident("value") || peek(1).ident("gas")) && peek(2).punct("(")) {
            next();
            const bool is_value = next().text == "value";
            next();
            auto arg = expression();
            expect_punct(")");
            if (is_value) {
                if (e.value_expr) throw Error(ErrorKind::SyntaxError, "duplicate .value option", arg->span);
                e.value_expr = arg;
            } else {
                if (e.gas_expr) throw Error(ErrorKind::SyntaxError, "duplicate .gas option", arg->span);
                e.gas_expr = arg;
            }
        }
    }

    ExprPtr member(const ExprPtr& base) {
        const Span dot = next().span;
        const Token& name_tok = peek();
        const std::string name = expect_identifier();
        auto e = std::make_shared<Expr>();
        e->span = base->span;
        e->base = base;

        if (base->kind == ExprKind::Ident && base->name == "msg") {
            if (name == "sender") e->kind = ExprKind::MsgSender;
            else if (name == "value") e->kind = ExprKind::MsgValue;
            else throw unsupported("msg." + name, name_tok.span);
            e->base = nullptr;
            return e;
        }
        if (name == "length") {
            e->kind = ExprKind::ArrayLength;
            return e;
        }
        if (name == "balance") {
            e->kind = ExprKind::Balance;
            return e;
        }
        if (name == "push" && peek().punct("(")) {
            next();
            e->kind = ExprKind::Push;
            e->args = call_arguments();
            if (e->args.size() != 1) throw Error(ErrorKind::SyntaxError, "push takes exactly one argument", dot);
            return e;
        }
        if (name == "call") {
            e->kind = ExprKind::LowLevelCall;
            call_options(*e);
            if (!e->value_expr) throw unsupported("low-level call without .value(...)", name_tok.span);
            expect_punct("(");
            if (!accept_punct(")")) throw unsupported("low-level call with call data", peek().span);
            return e;
        }
        if (name == "send" || name == "transfer" || name == "delegatecall" || name == "callcode")
            throw unsupported("address." + name, name_tok.span);

        // base.f(...) or base.f.value(v).gas(g)(...) is an external call.
        const bool has_options =
            peek().punct(".") && (peek(1).ident("value") || peek(1).ident("gas")) && peek(2).punct("(");
        if (has_options || peek().punct("(")) {
            e->kind = ExprKind::ExternalCall;
            e->name = name;
            call_options(*e);
            expect_punct("(");
            e->args = call_arguments();
            return e;
        }
        e->kind = ExprKind::Member;
        e->name = name;
        return e;
    }

    ExprPtr primary() {
        reject_unsupported_punct();
        const Token& t = peek();
        auto e = std::make_shared<Expr>();
        e->span = t.span;
        switch (t.kind) {
            case Tok::Number:
                e->kind = ExprKind::IntLit;
                e->number = parse_integer(next().text);
                if (peek().ident("wei")) next();
                else if (peek().ident("ether") || peek().ident("finney") || peek().ident("szabo"))
                    throw unsupported("ether units", peek().span);
                return e;
            case Tok::HexNumber:
                if (!opts_.hex_literals) throw unsupported("hex literals", t.span);
                e->kind = ExprKind::IntLit;
                e->number = parse_integer(next().text);
                return e;
            case Tok::String:
                e->kind = ExprKind::StringLit;
                e->text = next().text;
                return e;
            case Tok::Punct:
                if (t.punct("(")) {
                    next();
                    auto inner = expression();
                    if (peek().punct(",")) throw unsupported("tuples", peek().span);
                    expect_punct(")");
                    return inner;
                }
                if (t.punct("[")) {
                    next();
                    e->kind = ExprKind::ArrayLit;
                    if (!accept_punct("]")) {
                        do {
                            e->args.push_back(expression());
                        } while (accept_punct(","));
                        expect_punct("]");
                    }
                    if (e->args.empty()) throw Error(ErrorKind::SyntaxError, "empty array literal", t.span);
                    return e;
                }
                break;
            case Tok::Ident: {
                if (t.text == "true" || t.text == "false") {
                    e->kind = ExprKind::BoolLit;
                    e->bool_value = next().text == "true";
                    return e;
                }
                if (t.text == "this") {
                    next();
                    e->kind = ExprKind::This;
                    return e;
                }
                if (is_elementary_keyword(t.text) && peek(1).punct("(")) {
                    auto tn = std::make_shared<TypeName>();
                    tn->span = t.span;
                    tn->kind = TypeName::Kind::Elementary;
                    tn->name = next().text;
                    check_elementary(tn->name, tn->span);
                    next();
                    e->kind = ExprKind::TypeConv;
                    e->type_name = tn;
                    e->args = call_arguments();
                    if (e->args.size() != 1)
                        throw Error(ErrorKind::SyntaxError, "type conversion takes exactly one argument", t.span);
                    return e;
                }
                e->kind = ExprKind::Ident;
                e->name = next().text;
                return e;
            }
            default:
                break;
        }
        throw syntax_error({"expression"});
    }

    std::vector<Token> toks_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
    bool in_modifier_ = false;
    std::string contract_name_;

public:
    mutable std::vector<std::string> last_expected_;
};

Diagnostic to_diagnostic(const Error& e, const std::vector<std::string>& expected) {
    Diagnostic d;
    d.kind = e.kind();
    d.span = e.span();
    d.message = e.what();
    if (e.kind() == ErrorKind::UnsupportedFeature) {
        const std::string prefix = "unsupported feature: ";
        d.feature = d.message.rfind(prefix, 0) == 0 ? d.message.substr(prefix.size()) : d.message;
    } else if (e.kind() == ErrorKind::SyntaxError) {
        d.expected = expected;
    }
    return d;
}

/// Post-parse structural checks: unique contract names, at most one
/// constructor/fallback, no duplicate members.
void validate(const SourceUnit& unit, std::vector<Diagnostic>& diags) {
    auto report = [&](Span span, std::string msg) {
        Diagnostic d;
        d.kind = ErrorKind::DuplicateDeclaration;
        d.span = span;
        d.message = std::move(msg);
        diags.push_back(std::move(d));
    };
    std::set<std::string> contracts;
    for (const auto& c : unit.contracts) {
        if (!contracts.insert(c.name).second) report(c.span, "duplicate contract '" + c.name + "'");
        std::set<std::string> members;
        int ctors = 0;
        int fallbacks = 0;
        for (const auto& v : c.state_vars)
            if (!members.insert(v.name).second) report(v.span, "duplicate declaration of '" + v.name + "'");
        for (const auto& f : c.functions) {
            if (f.kind == FunctionKind::Constructor) {
                if (++ctors > 1) report(f.span, "contract '" + c.name + "' has more than one constructor");
            } else if (f.kind == FunctionKind::Fallback) {
                if (++fallbacks > 1) report(f.span, "contract '" + c.name + "' has more than one fallback function");
            } else if (!members.insert(f.name).second) {
                report(f.span, "duplicate declaration of '" + f.name + "' (overloading is not supported)");
            }
        }
        for (const auto& m : c.modifiers)
            if (!members.insert(m.name).second) report(m.span, "duplicate declaration of '" + m.name + "'");
        std::set<std::string> structs;
        for (const auto& s : c.structs)
            if (!structs.insert(s.name).second) report(s.span, "duplicate struct '" + s.name + "'");
    }
}

}  // namespace

ParseResult parse(std::string_view source, const ParseOptions& options) {
    ParseResult result;
    std::vector<Token> toks;
    try {
        toks = detail::tokenize(source);
    } catch (const Error& e) {
        result.diagnostics.push_back(to_diagnostic(e, {}));
        return result;
    }
    Parser p(std::move(toks), options);
    try {
        result.unit = p.source_unit();
    } catch (const Error& e) {
        result.diagnostics.push_back(to_diagnostic(e, p.last_expected_));
        return result;
    } catch (const std::invalid_argument& e) {
        Diagnostic d;
        d.message = e.what();
        result.diagnostics.push_back(std::move(d));
        return result;
    }
    validate(result.unit, result.diagnostics);
    return result;
}

ExprPtr parse_expression(std::string_view source, const ParseOptions& options) {
    Parser p(detail::tokenize(source), options);
    return p.standalone_expression();
}

}  // namespace solsem
