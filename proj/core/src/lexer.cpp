#include "lexer.hpp"

#include <array>
#include <cctype>

namespace solsem::detail {
namespace {

// Longest first so that maximal munch works by linear scan.
constexpr std::array<std::string_view, 44> kPuncts = {
    "<<=", ">>=", "**",  "=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=", "%=",
    "++",  "--",  "<<",  ">>", "&=", "|=", "^=", "(",  ")",  "[",  "]",  "{",  "}",  ";",  ",",
    ".",   "?",   ":",   "=",  "<",  ">",  "+",  "-",  "*",  "/",  "%",  "!",  "&",  "|",
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.span = here();
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(std::move(t));
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
                t.kind = Tok::Ident;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                              src_[pos_] == '_' || src_[pos_] == '$'))
                    advance();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = Tok::Number;
                if (c == '0' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X')) {
                    t.kind = Tok::HexNumber;
                    advance();
                    advance();
                    while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                } else {
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                }
                if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    throw Error(ErrorKind::SyntaxError, "malformed number literal", here());
            } else if (c == '"' || c == '\'') {
                t.kind = Tok::String;
                t.text = lex_string(c);
                finish(t);
                out.push_back(std::move(t));
                continue;
            } else {
                t.kind = Tok::Punct;
                bool matched = false;
                for (auto p : kPuncts) {
                    if (src_.substr(pos_, p.size()) == p) {
                        for (std::size_t i = 0; i < p.size(); ++i) advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    if (c == '^' || c == '~') {
                        advance();
                    } else {
                        throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", here());
                    }
                }
            }
            t.text = std::string(src_.substr(t.span.offset, pos_ - t.span.offset));
            finish(t);
            out.push_back(std::move(t));
        }
    }

private:
    Span here() const { return Span{line_, col_, static_cast<std::uint32_t>(pos_), 0}; }

    void finish(Token& t) const { t.span.length = static_cast<std::uint32_t>(pos_ - t.span.offset); }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                const Span start = here();
                advance();
                advance();
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
                if (pos_ + 1 >= src_.size()) throw Error(ErrorKind::SyntaxError, "unterminated comment", start);
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    std::string lex_string(char quote) {
        const Span start = here();
        advance();
        std::string value;
        while (pos_ < src_.size() && src_[pos_] != quote) {
            char c = src_[pos_];
            if (c == '\n') break;
            if (c == '\\' && pos_ + 1 < src_.size()) {
                advance();
                c = src_[pos_];
                switch (c) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case 'r': c = '\r'; break;
                    case '0': c = '\0'; break;
                    default: break;
                }
            }
            value.push_back(c);
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != quote)
            throw Error(ErrorKind::SyntaxError, "unterminated string literal", start);
        advance();
        return value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src) { return Lexer(src).run(); }

}  // namespace solsem::detail
