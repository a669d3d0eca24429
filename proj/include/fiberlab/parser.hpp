#pragma once

#include <string>
#include <vector>

#include "fiberlab/exactpoly.hpp"

namespace fiberlab {

enum class Field { Real, Complex };

/// Textual polynomial expression plus its variable context.
struct ExprSource {
    std::string text;
    std::vector<std::string> vars;  // ordered, nonempty identifiers
    Field field = Field::Real;
};

struct ParseError : std::runtime_error {
    std::size_t offset;  // byte offset into the source text
    ParseError(std::string msg, std::size_t off)
        : std::runtime_error(std::move(msg)), offset(off) {}
};

/// Recursive-descent parser. Grammar: integers, rationals "p/q", decimal
/// literals (converted exactly, 0.25 -> 1/4), declared variables, "i" in
/// complex mode, + - * ^ with precedence ^ > unary- > * > +/- and
/// right-associative ^; parentheses. Implicit multiplication is rejected.
/// Exponents are nonnegative integers capped at 64.
ExactPoly parse_expression(const ExprSource& src);

}  // namespace fiberlab
