#include "solsem/parser.hpp"

#include <sstream>

namespace solsem {

using namespace ast;

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\0': out += "\\0"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

std::string location_suffix(DataLocation loc) {
    switch (loc) {
        case DataLocation::Storage: return " storage";
        case DataLocation::Memory: return " memory";
        case DataLocation::Default: break;
    }
    return "";
}

std::string args_list(const std::vector<ExprPtr>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += print(*args[i]);
    }
    return out;
}

std::string call_options(const Expr& e) {
    std::string out;
    if (e.value_expr) out += ".value(" + print(*e.value_expr) + ")";
    if (e.gas_expr) out += ".gas(" + print(*e.gas_expr) + ")";
    return out;
}

std::string params(const std::vector<Param>& ps) {
    std::string out = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ", ";
        out += print(*ps[i].type) + location_suffix(ps[i].location);
        if (!ps[i].name.empty()) out += " " + ps[i].name;
    }
    return out + ")";
}

class StmtPrinter {
public:
    explicit StmtPrinter(std::ostringstream& out) : out_(out) {}

    void stmt(const Stmt& s, int depth) {
        indent(depth);
        switch (s.kind) {
            case StmtKind::VarDecl:
                out_ << (s.type ? print(*s.type) : std::string("var")) << location_suffix(s.location) << " " << s.name;
                if (s.expr) out_ << " = " << print(*s.expr);
                out_ << ";\n";
                break;
            case StmtKind::Assign:
                out_ << print(*s.target) << " = " << print(*s.expr) << ";\n";
                break;
            case StmtKind::ExprStmt:
                out_ << print(*s.expr) << ";\n";
                break;
            case StmtKind::Return:
                out_ << "return";
                if (s.expr) out_ << " " << print(*s.expr);
                out_ << ";\n";
                break;
            case StmtKind::Placeholder:
                out_ << "_;\n";
                break;
            case StmtKind::If:
                out_ << "if (" << print(*s.expr) << ")\n";
                stmt(*s.then_branch, depth + 1);
                if (s.else_branch) {
                    indent(depth);
                    out_ << "else\n";
                    stmt(*s.else_branch, depth + 1);
                }
                break;
            case StmtKind::While:
                out_ << "while (" << print(*s.expr) << ")\n";
                stmt(*s.then_branch, depth + 1);
                break;
            case StmtKind::Block:
                out_ << "{\n";
                for (const auto& c : s.body) stmt(*c, depth + 1);
                indent(depth);
                out_ << "}\n";
                break;
        }
    }

private:
    void indent(int depth) {
        for (int i = 0; i < depth; ++i) out_ << "    ";
    }

    std::ostringstream& out_;
};

}  // namespace

std::string print(const TypeName& t) {
    switch (t.kind) {
        case TypeName::Kind::Elementary:
        case TypeName::Kind::UserDefined:
            return t.name;
        case TypeName::Kind::Array:
            return print(*t.elem) + "[" + (t.length ? t.length->str() : std::string()) + "]";
        case TypeName::Kind::Mapping:
            return "mapping(" + print(*t.key) + " => " + print(*t.elem) + ")";
    }
    return "?";
}

std::string print(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Ident: return e.name;
        case ExprKind::IntLit: return e.number.str();
        case ExprKind::BoolLit: return e.bool_value ? "true" : "false";
        case ExprKind::StringLit: return quote(e.text);
        case ExprKind::ArrayLit: return "[" + args_list(e.args) + "]";
        case ExprKind::Index: return print(*e.base) + "[" + print(*e.index) + "]";
        case ExprKind::Member: return print(*e.base) + "." + e.name;
        case ExprKind::Call: return e.name + "(" + args_list(e.args) + ")";
        case ExprKind::TypeConv: return print(*e.type_name) + "(" + args_list(e.args) + ")";
        case ExprKind::ExternalCall:
            return print(*e.base) + "." + e.name + call_options(e) + "(" + args_list(e.args) + ")";
        case ExprKind::LowLevelCall: return print(*e.base) + ".call" + call_options(e) + "()";
        case ExprKind::Push: return print(*e.base) + ".push(" + args_list(e.args) + ")";
        case ExprKind::ArrayLength: return print(*e.base) + ".length";
        case ExprKind::Binary:
            return "(" + print(*e.base) + " " + std::string(to_string(e.binary_op)) + " " + print(*e.index) + ")";
        case ExprKind::Unary: return std::string("(") + (e.unary_op == UnaryOp::Not ? "!" : "-") + print(*e.base) + ")";
        case ExprKind::Conditional:
            return "(" + print(*e.base) + " ? " + print(*e.index) + " : " + print(*e.alt) + ")";
        case ExprKind::MsgSender: return "msg.sender";
        case ExprKind::MsgValue: return "msg.value";
        case ExprKind::This: return "this";
        case ExprKind::Balance: return print(*e.base) + ".balance";
    }
    return "?";
}

std::string print(const SourceUnit& unit) {
    std::ostringstream out;
    StmtPrinter sp(out);
    for (const auto& c : unit.contracts) {
        out << "contract " << c.name << " {\n";
        for (const auto& s : c.structs) {
            out << "    struct " << s.name << " {\n";
            for (const auto& f : s.fields) out << "        " << print(*f.type) << " " << f.name << ";\n";
            out << "    }\n";
        }
        for (const auto& v : c.state_vars) {
            out << "    " << print(*v.type);
            for (const auto& sp_name : v.specifiers) out << " " << sp_name;
            out << " " << v.name;
            if (v.init) out << " = " << print(*v.init);
            out << ";\n";
        }
        for (const auto& m : c.modifiers) {
            out << "    modifier " << m.name << params(m.params) << "\n";
            sp.stmt(*m.body, 1);
        }
        for (const auto& f : c.functions) {
            out << "    function ";
            if (f.kind != FunctionKind::Fallback) out << f.name;
            out << params(f.params);
            for (const auto& s : f.specifiers) out << " " << s;
            for (const auto& m : f.modifiers) {
                out << " " << m.name;
                if (!m.args.empty()) out << "(" << args_list(m.args) << ")";
            }
            if (!f.returns.empty()) out << " returns " << params(f.returns);
            out << "\n";
            sp.stmt(*f.body, 1);
        }
        out << "}\n";
    }
    return out.str();
}

}  // namespace solsem
