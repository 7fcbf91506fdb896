#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solsem {

struct Span {
    std::uint32_t line = 0;  // 1-based; 0 means unknown
    std::uint32_t col = 0;
    std::uint32_t offset = 0;
    std::uint32_t length = 0;
};

enum class ErrorKind {
    // static / semantic: reported with exit code 2
    SyntaxError,
    UnsupportedFeature,
    TypeError,
    UnknownIdentifier,
    DuplicateDeclaration,
    UnsizedType,
    ReturnOutsideFunction,
    // runtime: abort the enclosing transaction
    IndexOutOfBounds,
    DivisionByZero,
    RangeError,
    UnknownAddress,
    InsufficientBalance,
    CallDepth,
    StepLimit,
    // engine bugs
    ScopeUnderflow,
    Internal,
};

std::string_view to_string(ErrorKind k);

/// True for errors that indicate a malformed program rather than a failed
/// execution of a well-formed one.
bool is_semantic(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, Span span = {})
        : std::runtime_error(std::move(message)), kind_(kind), span_(span) {}

    ErrorKind kind() const noexcept { return kind_; }
    const Span& span() const noexcept { return span_; }

private:
    ErrorKind kind_;
    Span span_;
};

}  // namespace solsem
