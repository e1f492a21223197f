#include "qgroup/classical.hpp"
#include "qgroup/parse.hpp"

#include <doctest.h>

using namespace qgroup;

namespace {

QuiverPtr grid(int n) { return std::make_shared<Quiver>(Grid::uniform(n)); }

struct Poly {
    QuiverPtr q;
    PolyEngine e;
    Hopf<QFrac> h;
    explicit Poly(int n, Presentation p = Presentation::Uq) : q(grid(n)), e(q), h(e), pres(p) {}
    Presentation pres;
    Expr<QFrac> operator()(const std::string& t) const { return evaluate(e, pres, parse_poly(t, *q, pres)); }
};

struct Formal {
    QuiverPtr q;
    FormalEngine e;
    Hopf<SeriesH> h;
    Formal(int n, int order) : q(grid(n)), e(q, {10000, false, order, true}), h(e) {}
    Expr<SeriesH> operator()(const std::string& t) const {
        return evaluate(e, Presentation::UhTrunc, parse_formal(t, *q, Presentation::UhTrunc, e.options().order));
    }
};

QFrac qpoly(int e) { return QFrac::q_pow(e); }

}  // namespace

TEST_CASE("same-sign rule on grid {0,1,2}") {
    const Poly P(3);
    // X+[1,2) X+[0,1) -> q X+[0,1) X+[1,2) - q (1 + q^-1) X+[0,2)
    CHECK(P.e.same(P("X+[1,2)*X+[0,1)"), P("q*X+[0,1)*X+[1,2) - (q+1)*X+[0,2)")));
}

TEST_CASE("mixed relation for equal intervals") {
    const Poly P(3);
    CHECK(P.e.same(P("X-[0,1)*X+[0,1)"), P("X+[0,1)*X-[0,1) - (1+q^-1)*(1+K^-1[0,1))*H[0,1)")));
}

TEST_CASE("cartan conjugation follows (a|b)") {
    const Poly P(4);
    const Quiver& q = *P.q;
    for (const Interval& a : q.intervals())
        for (const Interval& b : q.intervals()) {
            const int s = q.sym(q.id(a), q.id(b));
            const std::string K = "K[" + std::to_string(a.lo) + "," + std::to_string(a.hi) + ")";
            const std::string Ki = "K^-1[" + std::to_string(a.lo) + "," + std::to_string(a.hi) + ")";
            const std::string X = "X+[" + std::to_string(b.lo) + "," + std::to_string(b.hi) + ")";
            CHECK(P.e.same(P(K + "*" + X + "*" + Ki), P(X).scaled(qpoly(s))));
        }
}

TEST_CASE("H X - q^(a|b) X H = ((a|b))_q X") {
    const Poly P(4);
    const Quiver& q = *P.q;
    for (const Interval& a : q.intervals())
        for (const Interval& b : q.intervals()) {
            const int s = q.sym(q.id(a), q.id(b));
            const auto H = embed(P.e, Presentation::Uq, {GenKind::H, a});
            for (int sign : {1, -1}) {
                const auto X = embed(P.e, Presentation::Uq, {sign > 0 ? GenKind::Xplus : GenKind::Xminus, b});
                const QFrac qint_s(LaurentQ::q_pow(sign * s) - LaurentQ(1), 1);  // (q^n - 1)/(q - 1)
                const auto lhs = P.e.mult(H, X) - P.e.mult(X, H).scaled(qpoly(sign * s));
                CHECK(P.e.same(lhs, X.scaled(qint_s)));
            }
        }
}

TEST_CASE("normal forms: fixed points, units, strategies") {
    const Poly P(3);
    CHECK(P.e.same(P("K[0,1)*K^-1[0,1)"), P("1")));
    const auto w = P("X+[0,1)*X-[1,2)");
    CHECK(w.size() == 1);
    CHECK(P.e.same(P.e.mult(P("X+[0,1)"), P("1")), P("X+[0,1)")));
    const Word raw{xm(0), xp(2), xm(1), xp(0)};
    CHECK(P.e.same(P.e.normal_form(raw, Strategy::Leftmost), P.e.normal_form(raw, Strategy::Rightmost)));
    for (const auto& [word, c] : P.e.normal_form(raw)) CHECK(P.e.triangular(word));
}

TEST_CASE("fuel exhaustion is reported") {
    const auto q = grid(4);
    const PolyEngine e(q, {5, false, 8, true});
    CHECK_THROWS_AS(e.normal_form(Word{xm(0), xm(3), xp(5), xp(1), xm(2), xp(4)}), NonterminationError);
}

TEST_CASE("U_h(sl2) on two points: [X+, X-] = sinh(h Xi/2) / sinh(h/2)") {
    const int N = 8;
    const Formal F(2, N);
    const auto comm = F.e.normal_form(Word{xp(0), xm(0)}) - F.e.normal_form(Word{xm(0), xp(0)});
    const SeriesH inv = SeriesH::qmqi(N + 2).inverse();  // 1 / (2 sinh(h/2))
    Expr<SeriesH> want;
    Rational fact = 1;
    for (int k = 1; k <= N + 1; ++k) {
        fact *= k;
        if (k % 2 == 0) continue;
        // 2 (h/2)^k / k!  times  1 / (2 sinh(h/2))
        Rational c = 2 / fact;
        for (int i = 0; i < k; ++i) c /= 2;
        want.add(Word(static_cast<std::size_t>(k), xi(0)), (SeriesH::h_pow(k, N + 2).scaled(c) * inv).with_prec(N));
    }
    CHECK(F.e.same(comm, want));
}

TEST_CASE("coproduct examples") {
    const Poly P(3);
    CHECK(P.e.same(P.h.coproduct(P("K[0,1)")), P.e.tensor({P("K[0,1)"), P("K[0,1)")})));
    CHECK(P.e.same(P.h.coproduct(P("X+[0,1)")),
                   P.e.tensor({P("X+[0,1)"), P("1")}) + P.e.tensor({P("K[0,1)"), P("X+[0,1)")})));
    CHECK(P.e.same(P.h.coproduct(P("H[0,2)")),
                   P.e.tensor({P("H[0,2)"), P("K[0,2)")}) + P.e.tensor({P("1"), P("H[0,2)")})));
    const auto d2 = P.h.iterated_coproduct(P("K[0,2)"), 2);
    CHECK(P.e.same(d2, P.e.tensor({P("K[0,2)"), P("K[0,2)"), P("K[0,2)")})));
    const auto x = P("X+[0,2)");
    CHECK(P.e.same(P.h.coproduct_slot(P.h.coproduct(x), 0), P.h.coproduct_slot(P.h.coproduct(x), 1)));
    CHECK(P.h.counit(x).is_zero());
    CHECK(P.h.counit(P("K[0,2)")) == QFrac(1));
}

TEST_CASE("formal coproduct of Xi is primitive") {
    const Formal F(3, 6);
    const auto x = F("Xi[0,2)");
    CHECK(F.e.same(F.h.coproduct(x), F.e.tensor({x, F("1")}) + F.e.tensor({F("1"), x})));
    CHECK(F.e.same(F.h.iterated_coproduct(x, 2),
                   F.e.tensor({x, F("1"), F("1")}) + F.e.tensor({F("1"), x, F("1")}) + F.e.tensor({F("1"), F("1"), x})));
    CHECK(F.e.same(F.h.antipode(x), -x));
}

TEST_CASE("antipode examples and S^2 on sl2") {
    const Poly P(2);
    CHECK(P.e.same(P.h.antipode(P("K[0,1)")), P("K^-1[0,1)")));
    CHECK(P.e.same(P.h.antipode(P("X+[0,1)")), P("-K^-1[0,1)*X+[0,1)")));
    // S^2(X+) = K^-1 X+ K = q^-2 X+ and S^2(X-) = q^2 X-
    CHECK(P.e.same(P.h.antipode(P.h.antipode(P("X+[0,1)"))), P("q^-2*X+[0,1)")));
    CHECK(P.e.same(P.h.antipode(P.h.antipode(P("X-[0,1)"))), P("q^2*X-[0,1)")));
}

TEST_CASE("antipode axiom on grid 3 generators") {
    const Poly P(3);
    for (const Generator& g : generators(*P.q, Presentation::Uq)) {
        const auto x = embed(P.e, Presentation::Uq, g);
        const auto d = P.h.coproduct(x);
        auto s = [&](const Word& w) { return P.h.antipode(w); };
        CAPTURE(generator_text(*P.q, Presentation::Uq, g));
        CHECK(P.e.same(P.h.multiply_out(P.h.map_slot(d, 0, s)), P.e.scalar(P.h.counit(x))));
        CHECK(P.e.same(P.h.multiply_out(P.h.map_slot(d, 1, s)), P.e.scalar(P.h.counit(x))));
    }
}

TEST_CASE("pairing generator values") {
    const int N = 6;
    const auto q = grid(3);
    const Pairing pr(q, N, PairingConvention::OpOnMinus);
    const FormalEngine& e = pr.engine();
    CHECK(pr.pair(e.scalar(e.one()), e.scalar(e.one())).with_prec(N) == SeriesH(Rational(1), N));
    CHECK(pr.pair(e.word({xi(0)}), e.word({xi(0)})).with_prec(N) == SeriesH::h_pow(-1, N).scaled(2));
    CHECK(pr.pair(e.word({xi(0)}), e.word({xi(1)})).with_prec(N) == SeriesH::h_pow(-1, N).scaled(-1));
    const SeriesH root = pr.pair(e.word({xp(0)}), e.word({xm(0)})).with_prec(N);
    CHECK(root * SeriesH::qmqi(N + 2) == SeriesH(Rational(1), N - 1));
    CHECK(pr.pair(e.word({xp(0)}), e.word({xm(1)})).is_zero());
    CHECK_THROWS(pr.pair(e.word({xm(0)}), e.word({xm(0)})));
}

TEST_CASE("lie bialgebra examples on grid {0,1,2}") {
    const auto q = grid(3);
    const LieBialgebra L(q);
    const int a = q->id({0, 1}), b = q->id({1, 2}), c = q->id({0, 2});
    CHECK(L.bracket(L.xplus(a), L.xplus(b)) == L.xplus(c));
    CHECK(L.bracket(L.xplus(c), L.xminus(b)) == L.xplus(a));
    CHECK(L.bracket(L.xi(a), L.xi(c)).empty());
    CHECK(L.xi(c) == L.xi(a) + L.xi(b));
    CHECK(L.cobracket(L.xi(c)).empty());
    CHECK(L.cobracket(L.xplus(a)) == L.wedge(L.xi(a), L.xplus(a)));
    const Lie2 want = L.wedge(L.xi(c), L.xplus(c)) + L.wedge(L.xplus(a), L.xplus(b)).scaled(Rational(q->p(a, c))) +
                      L.wedge(L.xplus(b), L.xplus(a)).scaled(Rational(q->p(b, c)));
    CHECK(L.cobracket(L.xplus(c)) == want);
}

TEST_CASE("sl2 brackets on two points") {
    const auto q = grid(2);
    const LieBialgebra L(q);
    CHECK(L.bracket(L.xplus(0), L.xminus(0)) == L.xi(0));
    CHECK(L.bracket(L.xi(0), L.xplus(0)) == L.xplus(0).scaled(2));
    CHECK(L.bracket(L.xi(0), L.xminus(0)) == L.xminus(0).scaled(-2));
}

TEST_CASE("q -> 1 limits") {
    const Poly P(3);
    const ClassicalEngine ce(P.q);
    const int a = P.q->id({0, 1});
    CHECK(limit_uq(P.e, ce, P("K[0,1)")) == ce.scalar(Rational(1)));
    CHECK(limit_uq(P.e, ce, P("(q+1)*H[0,1)")) == ce.xi_of(a).scaled(Rational(2)));
    // the limit is an algebra map, so the commutator goes to [2x+, 2x-] = 4 xi, not 0
    const auto lp = limit_uq(P.e, ce, P("X+[0,1)")), lm = limit_uq(P.e, ce, P("X-[0,1)"));
    const auto comm = limit_uq(P.e, ce, P("X+[0,1)*X-[0,1) - X-[0,1)*X+[0,1)"));
    CHECK(comm == ce.mult(lp, lm) - ce.mult(lm, lp));
    CHECK(comm == ce.xi_of(a).scaled(Rational(4)));
    CHECK(limit_uq(P.e, ce, P("X+[0,2)")) == ce.word({xp(P.q->id({0, 2}))}).scaled(Rational(2)));
}

TEST_CASE("UqTilde first-order bracket uses the [2x,2x] normalization") {
    const Poly P(3, Presentation::UqTilde);
    const int a = P.q->id({0, 1}), c = P.q->id({0, 2});
    const LieElem got = first_order_bracket_uqtilde(P.e, P("X+[0,1)"), P("X+[1,2)"));
    CHECK(got == LieElem(xp(c), Rational(4 * P.q->p(a, c))));
    CHECK(got == LieElem(xp(c), Rational(4)));
}
