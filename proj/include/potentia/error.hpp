#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace potentia {

enum class ErrorKind {
    NonFinite,
    Overflow,
    InvalidSignature,
    InconsistentSolution,
    InvalidAssignment,
    Normalization,
    IncompatibleSubalgebra,
    Divergence,
    Syntax,
    UnknownSymbol,
    DivisionByZero,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::Overflow: return "arithmetic-overflow";
    case ErrorKind::InvalidSignature: return "invalid-signature";
    case ErrorKind::InconsistentSolution: return "inconsistent-solution";
    case ErrorKind::InvalidAssignment: return "invalid-assignment";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::IncompatibleSubalgebra: return "incompatible-subalgebra";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownSymbol: return "unknown-symbol";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    }
    return "unknown";
}

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Malformed input text, as opposed to a well-formed request outside the
    // mathematical domain.
    bool is_usage_error() const noexcept {
        return kind_ == ErrorKind::Syntax || kind_ == ErrorKind::UnknownSymbol ||
               kind_ == ErrorKind::DivisionByZero;
    }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::size_t offset, const std::string& message)
        : Error(kind, "at offset " + std::to_string(offset) + ": " + message),
          offset_(offset), message_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t offset_;
    std::string message_;
};

class DivergenceError : public Error {
public:
    explicit DivergenceError(std::size_t step)
        : Error(ErrorKind::Divergence,
                "evolution diverged at step " + std::to_string(step)),
          step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

} // namespace potentia
