#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/types.hpp"

namespace beltrami {

enum class FnTag { Exp, Log, Sin, Cos, Tan, Sqrt, Arctan, Artanh };

const char* fn_name(FnTag tag);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. `norm()` is its own node kind: it denotes the
/// Euclidean norm of the full coordinate tuple and takes no argument.
struct Expr {
    enum class Kind { Number, ImagUnit, Coord, Neg, Add, Sub, Mul, Div, Pow, Call, Norm };

    static constexpr std::size_t npos = ~static_cast<std::size_t>(0);

    Kind kind;
    double number = 0.0;   // Number
    int coord = -1;        // Coord: resolved index
    std::string name;      // Coord: spelling as written
    FnTag fn{};            // Call
    ExprPtr a, b;
    std::size_t pos = npos;  // source offset; npos for synthesized nodes
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message)
        : std::runtime_error(message + " (offset " + std::to_string(position) + ")"),
          position_(position),
          message_(message) {}

    std::size_t position() const { return position_; }
    const std::string& message() const { return message_; }

private:
    std::size_t position_;
    std::string message_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(std::size_t position, const std::string& message)
        : std::runtime_error(message), position_(position) {}

    /// Offset of the offending subexpression, Expr::npos if synthesized.
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses `text` against the declared coordinate list. Aliases u1..uN resolve
/// to coordinates by position unless shadowed by a declared name. Throws
/// ParseError with a character offset on any syntax or resolution failure.
ExprPtr parse(std::string_view text, std::span<const std::string> coords);

/// Minimal-parenthesis rendering; parse(print(e)) is structurally equal to e.
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

bool structurally_equal(const Expr& a, const Expr& b);
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    return structurally_equal(*a, *b);
}

// synthesized-AST builders (used by field combinators and the harmonic
// constructions); negative literals come out as Neg(Number) so printing
// round-trips
ExprPtr make_num(double v);
ExprPtr make_imag();
ExprPtr make_coord(int index, std::string name);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, ExprPtr b);
ExprPtr make_call(FnTag fn, ExprPtr a);
ExprPtr make_norm();

}  // namespace beltrami
