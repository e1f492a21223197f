// Text expressions over presentation generators.
//
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' int)*
//   atom   := gen | number | 'q' | 'h' | '(' expr ')'
//   gen    := kind '[' rational ',' rational ')'
//   kind   := X+ | X- | H | K | K^-1 | Xi | x+ | x- | xi
//
// Negative powers are allowed on invertible scalars only.
#pragma once

#include "qgroup/ncalg.hpp"

namespace qgroup {

class ExprError : public ParseError {
public:
    enum class Reason { Syntax, UnknownGenerator, OffGrid, Scalar };
    ExprError(Reason r, const std::string& msg, std::size_t pos) : ParseError(msg, pos), reason_(r) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

// Uq, UqTilde
PresExpr<QFrac> parse_poly(std::string_view text, const Quiver& q, Presentation p);
// UhTrunc, UhTildeTrunc; scalars carry precision `order`
PresExpr<SeriesH> parse_formal(std::string_view text, const Quiver& q, Presentation p, int order);
// ClassicalU
PresExpr<Rational> parse_classical(std::string_view text, const Quiver& q);

}  // namespace qgroup
