#pragma once

#include "solsem/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace solsem {

struct Diagnostic {
    enum class Severity { Error, Warning };

    Severity severity = Severity::Error;
    ErrorKind kind = ErrorKind::SyntaxError;
    Span span;
    std::string message;
    std::string feature;                // UnsupportedFeature: the construct's name
    std::vector<std::string> expected;  // SyntaxError: what would have been accepted

    /// `file:line:col: message`
    std::string format(std::string_view file) const;
};

struct ParseOptions {
    /// Accept `constructor(...)` and `fallback()` in addition to the
    /// pre-0.5 same-name constructor and unnamed fallback.
    bool modern_syntax = false;
    /// Accept hex number literals (used for addresses in scenario files).
    bool hex_literals = false;
};

struct ParseResult {
    ast::SourceUnit unit;
    std::vector<Diagnostic> diagnostics;

    bool ok() const;
};

/// Parses a source text of the supported Solidity subset. Deterministic and
/// free of shared state.
ParseResult parse(std::string_view source, const ParseOptions& options = {});

/// Parses a single expression (used for scenario asserts and arguments).
/// Throws solsem::Error on malformed input.
ast::ExprPtr parse_expression(std::string_view source, const ParseOptions& options = {});

/// Renders an AST back to source that re-parses to a structurally equal AST.
std::string print(const ast::SourceUnit& unit);
std::string print(const ast::Expr& e);
std::string print(const ast::TypeName& t);

}  // namespace solsem
