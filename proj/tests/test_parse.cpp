#include "qgroup/parse.hpp"

#include <doctest.h>

using namespace qgroup;

namespace {

ExprError::Reason reason_of(const std::string& text, const Quiver& q, Presentation p) {
    try {
        parse_poly(text, q, p);
    } catch (const ExprError& e) {
        return e.reason();
    }
    FAIL("no error for " << text);
    return ExprError::Reason::Syntax;
}

}  // namespace

TEST_CASE("parser examples") {
    const Quiver q(Grid::uniform(3));
    const auto x = parse_poly("X+[0,1)", q, Presentation::Uq);
    REQUIRE(x.size() == 1);
    CHECK(x.begin()->first.size() == 1);

    const auto y = parse_poly("(q-1)*H[0,1)*K^-1[1,2)", q, Presentation::Uq);
    REQUIRE(y.size() == 1);
    CHECK(y.begin()->first.size() == 2);
    CHECK(y.begin()->second == QFrac(LaurentQ::q_pow(1) - LaurentQ(1)));

    try {
        parse_poly("X+[0,5)", q, Presentation::Uq);
        FAIL("expected an off-grid error");
    } catch (const ExprError& e) {
        CHECK(e.reason() == ExprError::Reason::OffGrid);
        CHECK(e.pos() == 5);
    }
}

TEST_CASE("parser errors") {
    const Quiver q(Grid::uniform(3));
    CHECK(reason_of("X+[0,1", q, Presentation::Uq) == ExprError::Reason::Syntax);
    CHECK(reason_of("Xi[0,1)", q, Presentation::Uq) == ExprError::Reason::UnknownGenerator);
    CHECK(reason_of("Y[0,1)", q, Presentation::Uq) == ExprError::Reason::UnknownGenerator);
    CHECK(reason_of("(q+1)^-1*H[0,1)", q, Presentation::Uq) == ExprError::Reason::Scalar);
    CHECK(reason_of("X+[1,0)", q, Presentation::Uq) == ExprError::Reason::OffGrid);
    CHECK_THROWS_AS(parse_poly("X+[0,1)^-1", q, Presentation::Uq), ExprError);
    CHECK_THROWS_AS(parse_poly("X+[0,1) +", q, Presentation::Uq), ExprError);
    CHECK_THROWS_AS(parse_classical("X+[0,1)", q), ExprError);
    CHECK_THROWS_AS(parse_formal("H[0,1)", q, Presentation::UhTrunc, 4), ExprError);
}

TEST_CASE("parser algebra: sums, powers and units") {
    const Quiver q(Grid::uniform(3));
    const auto a = parse_poly("q^-1*(q-1)^-1*X+[0,1) - X+[0,1)", q, Presentation::Uq);
    REQUIRE(a.size() == 1);
    const QFrac want = QFrac(LaurentQ::q_pow(-1), 1) - QFrac(1);
    CHECK(a.begin()->second == want);
    const auto b = parse_poly("(X+[0,1) + X-[1,2))^2", q, Presentation::Uq);
    CHECK(b.size() == 4);
    const auto c = parse_formal("h^-1*Xi[0,1)", q, Presentation::UhTrunc, 4);
    REQUIRE(c.size() == 1);
    CHECK(c.begin()->second.valuation() == -1);
    const auto d = parse_classical("1/2*x+[0,2) - xi[1,2)", q);
    CHECK(d.size() == 2);
}
