#include "solsem/errors.hpp"

namespace solsem {

std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
        case ErrorKind::TypeError: return "TypeError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
        case ErrorKind::UnsizedType: return "UnsizedType";
        case ErrorKind::ReturnOutsideFunction: return "ReturnOutsideFunction";
        case ErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::RangeError: return "RangeError";
        case ErrorKind::UnknownAddress: return "UnknownAddress";
        case ErrorKind::InsufficientBalance: return "InsufficientBalance";
        case ErrorKind::CallDepth: return "CallDepth";
        case ErrorKind::StepLimit: return "StepLimit";
        case ErrorKind::ScopeUnderflow: return "ScopeUnderflow";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

bool is_semantic(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError:
        case ErrorKind::UnsupportedFeature:
        case ErrorKind::TypeError:
        case ErrorKind::UnknownIdentifier:
        case ErrorKind::DuplicateDeclaration:
        case ErrorKind::UnsizedType:
        case ErrorKind::ReturnOutsideFunction:
            return true;
        default:
            return false;
    }
}

}  // namespace solsem
