#pragma once

#include "solsem/errors.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace solsem::detail {

enum class Tok { Ident, Number, HexNumber, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;

    bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
    bool punct(std::string_view t) const { return is(Tok::Punct, t); }
    bool ident(std::string_view t) const { return is(Tok::Ident, t); }
};

/// Splits source text into tokens; comments and whitespace are dropped.
/// Throws Error(SyntaxError) on malformed input.
std::vector<Token> tokenize(std::string_view src);

}  // namespace solsem::detail
