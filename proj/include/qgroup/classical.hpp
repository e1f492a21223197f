// The Lie bialgebra g_X on the grid, and the q -> 1 / h -> 0 limits of the
// quantum presentations.
#pragma once

#include "qgroup/hopf.hpp"

#include <array>

namespace qgroup {

// Degree-one elements of U(g_X), indexed by single letters (x+, xi_cell, x-).
using LieElem = LinComb<Letter, Rational>;
// Elements of g (x) g and g (x) g (x) g.
using Lie2 = LinComb<std::array<Letter, 2>, Rational>;
using Lie3 = LinComb<std::array<Letter, 3>, Rational>;

class ValuationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LieBialgebra {
public:
    explicit LieBialgebra(QuiverPtr q);
    const ClassicalEngine& engine() const { return eng_; }
    const Quiver& quiver() const { return eng_.quiver(); }

    LieElem xi(int interval) const;  // sum of the cell xi's
    LieElem xplus(int interval) const;
    LieElem xminus(int interval) const;
    // x+_a, x-_a for every interval, xi for every cell: a basis of g
    std::vector<Letter> basis() const;

    LieElem bracket(const LieElem& a, const LieElem& b) const;
    Lie2 cobracket(const LieElem& a) const;
    Lie2 wedge(const LieElem& a, const LieElem& b) const;  // (a (x) b - b (x) a) / 2

    LieElem jacobi_defect(Letter a, Letter b, Letter c) const;
    Lie3 cojacobi_defect(Letter a) const;                // cyclic sum of (delta (x) id) delta
    Lie2 cocycle_defect(Letter a, Letter b) const;       // delta[a,b] - a.delta(b) + b.delta(a)

    std::string text(const LieElem& e) const;
    std::string text(const Lie2& t) const;

private:
    Lie2 cobracket(Letter l) const;
    Lie2 ad(const LieElem& a, const Lie2& t) const;
    ClassicalEngine eng_;
};

LieElem to_lie(const Expr<Rational>& e);  // throws unless every word has length one
Expr<Rational> from_lie(const LieElem& e);
Lie2 to_lie2(const TExpr<Rational>& t);   // throws unless every slot is a single letter

// ------------------------------------------------------------- limits

// Commutative monomial of the q = 1 coordinate ring of UqTilde:
// X+ multiset, K exponent per cell, X- multiset.
struct CommMono {
    Word plus;
    std::vector<int> k;
    Word minus;
    auto operator<=>(const CommMono&) const = default;
    int degree() const;
};
using CommPoly = LinComb<CommMono, Rational>;
std::string comm_text(const Quiver& q, const CommPoly& p);

// Reading of an element modulo I^2, I the augmentation ideal: the constant
// term and the linear part. For UqTilde the linear part is in the variables
// Hbar_cell (returned as xi letters) and Xbar (returned as x letters).
struct Cotangent {
    Rational constant;
    LieElem linear;
};

// U_q -> U(g): Kd -> 1, Hd -> xi, Xd -> 2x, q -> 1, via the Uq basis.
Expr<Rational> limit_uq(const PolyEngine& pe, const ClassicalEngine& ce, const Expr<QFrac>& x);
// UqTilde -> k[X+, K^+-1, X-] at q = 1.
CommPoly limit_uqtilde(const PolyEngine& pe, const Expr<QFrac>& x);
// The same readings for the formal Drinfeld dual, coefficients at h = 0
// in the Xibar / Xbar basis.
Cotangent cotangent(const Quiver& q, const CommPoly& p);
Cotangent cotangent_uhtilde(const FormalEngine& fe, const Expr<SeriesH>& x);

// Under Hbar -> xi, Xbar -> 2x: ([a, b] / (q-1)) mod (q-1) mod I^2.
LieElem first_order_bracket_uqtilde(const PolyEngine& pe, const Expr<QFrac>& a, const Expr<QFrac>& b);
// Under Xibar -> xi, Xbar -> x: ([a, b] / h) mod h mod I^2.
LieElem first_order_bracket_uhtilde(const FormalEngine& fe, const Expr<SeriesH>& a, const Expr<SeriesH>& b);
// (Delta - Delta^op)(x) / (q-1) mod (q-1), pushed to U(g) (x) U(g).
TExpr<Rational> first_order_cobracket_uq(const Hopf<QFrac>& h, const ClassicalEngine& ce, const Expr<QFrac>& x);
// (Delta - Delta^op)(x) mod h, read in (I/I^2) (x) (I/I^2) under Xibar -> xi, Xbar -> x.
// `residual` collects anything outside I (x) I, which must vanish.
Lie2 cobracket_uhtilde(const Hopf<SeriesH>& h, const Expr<SeriesH>& x, TExpr<Rational>* residual = nullptr);

// Letterwise specialization of a presentation expression of Uq:
// K^+-1 -> 1, H -> xi, X -> 2x, q -> 1, normalized in U(g).
Expr<Rational> specialize(const ClassicalEngine& ce, const PresExpr<QFrac>& x);

}  // namespace qgroup
