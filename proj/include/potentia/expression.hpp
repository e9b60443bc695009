// expression.hpp
// Text form of algebra elements: a small recursive-descent parser, an
// evaluator into Multivector, and the canonical printer.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' unary) | ('/' NUMBER))*
//   unary   := '-' unary | power
//   power   := primary ('^' INTEGER)?
//   primary := NUMBER | SYMBOL | '(' expr ')'
//
// Symbols: e0 (= 1), e1, e2, e3, e12, e23, e31, e123 and i (= e123).
// Juxtaposition is not multiplication.

#pragma once

#include "potentia/clifford.hpp"
#include "potentia/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>

namespace potentia {

struct Expression;
using ExprPtr = std::unique_ptr<Expression>;

namespace ast {

struct Literal {
    double value;
};

struct Symbol {
    Blade blade;
};

struct Negate {
    ExprPtr operand;
};

struct Binary {
    char op; // '+', '-' or '*'
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Power {
    ExprPtr base;
    std::uint64_t exponent;
};

struct Divide {
    ExprPtr numerator;
    double divisor;
    std::size_t divisor_offset;
};

} // namespace ast

struct Expression {
    std::variant<ast::Literal, ast::Symbol, ast::Negate, ast::Binary, ast::Power, ast::Divide> node;
    std::size_t offset = 0; // byte offset of the first token
    std::size_t depth = 1;
};

inline constexpr std::size_t kMaxExpressionDepth = 2048;

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

inline std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::End, start, {}};
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') {
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            }
            const auto text = src_.substr(start, pos_ - start);
            if (text == ".") throw ParseError(ErrorKind::Syntax, start, "malformed number");
            return {Tok::Number, start, text};
        }
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
            return {Tok::Ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        const auto text = src_.substr(start, 1);
        switch (c) {
        case '+': return {Tok::Plus, start, text};
        case '-': return {Tok::Minus, start, text};
        case '*': return {Tok::Star, start, text};
        case '/': return {Tok::Slash, start, text};
        case '^': return {Tok::Caret, start, text};
        case '(': return {Tok::LParen, start, text};
        case ')': return {Tok::RParen, start, text};
        default: break;
        }
        throw ParseError(ErrorKind::Syntax, start, "unexpected character");
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

inline std::optional<Blade> symbol_blade(std::string_view name) {
    if (name == "e0") return Blade::Scalar;
    if (name == "e1") return Blade::E1;
    if (name == "e2") return Blade::E2;
    if (name == "e3") return Blade::E3;
    if (name == "e12") return Blade::E12;
    if (name == "e23") return Blade::E23;
    if (name == "e31") return Blade::E31;
    if (name == "e123" || name == "i") return Blade::E123;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    ExprPtr parse() {
        auto e = expr();
        if (cur_.kind != Tok::End) {
            throw ParseError(ErrorKind::Syntax, cur_.offset, "expected operator or end of input, found " + describe(cur_));
        }
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    template <typename Node>
    ExprPtr make(std::size_t offset, std::size_t depth, Node node) {
        if (depth > kMaxExpressionDepth) {
            throw ParseError(ErrorKind::Syntax, offset, "expression nested too deeply");
        }
        return ExprPtr(new Expression{std::move(node), offset, depth});
    }

    ExprPtr expr() {
        auto lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const char op = cur_.kind == Tok::Plus ? '+' : '-';
            advance();
            auto rhs = term();
            const std::size_t depth = 1 + std::max(lhs->depth, rhs->depth);
            const std::size_t offset = lhs->offset;
            lhs = make(offset, depth, ast::Binary{op, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr term() {
        auto lhs = unary();
        for (;;) {
            if (cur_.kind == Tok::Star) {
                advance();
                auto rhs = unary();
                const std::size_t depth = 1 + std::max(lhs->depth, rhs->depth);
                const std::size_t offset = lhs->offset;
                lhs = make(offset, depth, ast::Binary{'*', std::move(lhs), std::move(rhs)});
            } else if (cur_.kind == Tok::Slash) {
                advance();
                if (cur_.kind != Tok::Number) {
                    throw ParseError(ErrorKind::Syntax, cur_.offset,
                                     "expected numeric literal divisor, found " + describe(cur_));
                }
                const Token divisor = cur_;
                advance();
                const std::size_t depth = 1 + lhs->depth;
                const std::size_t offset = lhs->offset;
                lhs = make(offset, depth, ast::Divide{std::move(lhs), number_value(divisor), divisor.offset});
            } else {
                return lhs;
            }
        }
    }

    ExprPtr unary() {
        if (cur_.kind == Tok::Minus) {
            const std::size_t offset = cur_.offset;
            if (++nesting_ > kMaxExpressionDepth) {
                throw ParseError(ErrorKind::Syntax, offset, "expression nested too deeply");
            }
            advance();
            auto operand = unary();
            --nesting_;
            const std::size_t depth = 1 + operand->depth;
            return make(offset, depth, ast::Negate{std::move(operand)});
        }
        return power();
    }

    ExprPtr power() {
        auto base = primary();
        if (cur_.kind != Tok::Caret) return base;
        advance();
        if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string_view::npos) {
            throw ParseError(ErrorKind::Syntax, cur_.offset,
                             "expected nonnegative integer exponent, found " + describe(cur_));
        }
        std::uint64_t exponent = 0;
        const auto [ptr, ec] = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), exponent);
        if (ec != std::errc() || ptr != cur_.text.data() + cur_.text.size()) {
            throw ParseError(ErrorKind::Syntax, cur_.offset, "exponent out of range");
        }
        advance();
        if (cur_.kind == Tok::Caret) {
            throw ParseError(ErrorKind::Syntax, cur_.offset, "chained exponents need parentheses");
        }
        const std::size_t depth = 1 + base->depth;
        const std::size_t offset = base->offset;
        return make(offset, depth, ast::Power{std::move(base), exponent});
    }

    ExprPtr primary() {
        const Token t = cur_;
        switch (t.kind) {
        case Tok::Number:
            advance();
            return make(t.offset, 1, ast::Literal{number_value(t)});
        case Tok::Ident: {
            const auto blade = symbol_blade(t.text);
            if (!blade) {
                throw ParseError(ErrorKind::UnknownSymbol, t.offset, "unknown symbol '" + std::string(t.text) + "'");
            }
            advance();
            return make(t.offset, 1, ast::Symbol{*blade});
        }
        case Tok::LParen: {
            if (++nesting_ > kMaxExpressionDepth) {
                throw ParseError(ErrorKind::Syntax, t.offset, "expression nested too deeply");
            }
            advance();
            auto inner = expr();
            if (cur_.kind != Tok::RParen) {
                throw ParseError(ErrorKind::Syntax, cur_.offset, "expected ')', found " + describe(cur_));
            }
            advance();
            --nesting_;
            return inner;
        }
        default:
            throw ParseError(ErrorKind::Syntax, t.offset, "expected expression, found " + describe(t));
        }
    }

    static double number_value(const Token& t) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v,
                                               std::chars_format::fixed);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
            throw ParseError(ErrorKind::Syntax, t.offset, "numeric literal out of range");
        }
        return v;
    }

    Lexer lexer_;
    Token cur_{Tok::End, 0, {}};
    std::size_t nesting_ = 0;
};

inline Multivector power(Multivector base, std::uint64_t n) {
    Multivector acc = one();
    while (n != 0) {
        if (n & 1U) acc = mul(acc, base);
        n >>= 1U;
        if (n != 0) base = mul(base, base);
    }
    return acc;
}

} // namespace detail

/// Parses text into an expression tree. Throws ParseError carrying the byte
/// offset of the offending token.
inline ExprPtr parse(std::string_view text) { return detail::Parser(text).parse(); }

inline Multivector eval(const Expression& expr) {
    struct Visitor {
        Multivector operator()(const ast::Literal& n) const { return Multivector::scalar(n.value); }
        Multivector operator()(const ast::Symbol& n) const { return Multivector::basis(n.blade); }
        Multivector operator()(const ast::Negate& n) const { return scale(-1.0, eval(*n.operand)); }
        Multivector operator()(const ast::Binary& n) const {
            const Multivector lhs = eval(*n.lhs);
            const Multivector rhs = eval(*n.rhs);
            switch (n.op) {
            case '+': return add(lhs, rhs);
            case '-': return sub(lhs, rhs);
            default: return mul(lhs, rhs);
            }
        }
        Multivector operator()(const ast::Power& n) const { return detail::power(eval(*n.base), n.exponent); }
        Multivector operator()(const ast::Divide& n) const {
            if (n.divisor == 0.0) {
                throw ParseError(ErrorKind::DivisionByZero, n.divisor_offset, "division by zero");
            }
            return scale(1.0 / n.divisor, eval(*n.numerator));
        }
    };
    return std::visit(Visitor{}, expr.node);
}

inline Multivector parse_multivector(std::string_view text) { return eval(*parse(text)); }

// Shortest fixed-notation decimal that reads back to exactly v.
inline std::string format_number(double v) {
    std::array<char, 400> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), ptr);
}

inline constexpr std::array<std::string_view, kBladeCount> kPrintNames = {
    "", "e1", "e2", "e3", "e12", "e23", "e31", "i"};

/// Canonical text: basis order 1, e1, e2, e3, e12, e23, e31, i; zero terms
/// dropped; unit coefficients elided. The zero element prints as "0".
inline std::string print_canonical(const Multivector& x) {
    std::string out;
    for (std::size_t b = 0; b < kBladeCount; ++b) {
        const double c = x[b];
        if (c == 0.0) continue;
        const bool negative = std::signbit(c);
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        const double mag = std::abs(c);
        if (b == 0) {
            out += format_number(mag);
        } else if (mag == 1.0) {
            out += kPrintNames[b];
        } else {
            out += format_number(mag);
            out += "*";
            out += kPrintNames[b];
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace potentia
