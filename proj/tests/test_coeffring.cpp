#include "qgroup/coeffring.hpp"

#include <doctest.h>

#include <random>

using namespace qgroup;

namespace {

// value of a Laurent polynomial at a rational point, term by term
Rational at(const LaurentQ& x, const Rational& q) {
    Rational s = 0;
    for (int e = x.lo(); e <= x.hi(); ++e) {
        Rational t = x.coeff(e);
        for (int i = 0; i < (e < 0 ? -e : e); ++i) {
            if (e < 0) t /= q;
            else t *= q;
        }
        s += t;
    }
    return s;
}

LaurentQ random_laurent(std::mt19937& g) {
    LaurentQ x;
    for (int i = 0; i < 4; ++i) x += LaurentQ::monomial(static_cast<Int>(g() % 7) - 3, static_cast<int>(g() % 7) - 3);
    return x;
}

Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("laurent arithmetic agrees with evaluation at sample points") {
    std::mt19937 g(7);
    for (int i = 0; i < 200; ++i) {
        const LaurentQ a = random_laurent(g), b = random_laurent(g);
        for (const Rational q : {Rational(2), Rational(-3), Rational(1, 5)}) {
            CHECK(at(a * b, q) == at(a, q) * at(b, q));
            CHECK(at(a + b, q) == at(a, q) + at(b, q));
            CHECK(at(a.bar(), q) == at(a, 1 / q));
        }
    }
}

TEST_CASE("quantum integers and (q-1) division") {
    for (int n = 1; n <= 6; ++n) {
        LaurentQ s;
        for (int e = 0; e < n; ++e) s += LaurentQ::q_pow(e);
        CHECK(qint(n) == s);
        CHECK(qint(n).sum() == n);
    }
    const LaurentQ qm1 = LaurentQ::q_pow(1) - LaurentQ(1);
    CHECK(qm1.pow(3).qm1_valuation() == 3);
    CHECK((qm1.pow(2) * qint(3)).div_qm1() == qm1 * qint(3));
    CHECK_FALSE(qint(3).div_qm1().has_value());
}

TEST_CASE("laurent overflow traps") {
    const LaurentQ big(Int(1) << 62);
    CHECK_THROWS(big * LaurentQ(4));
}

TEST_CASE("laurent text round trip") {
    std::mt19937 g(3);
    for (int i = 0; i < 50; ++i) {
        const LaurentQ a = random_laurent(g);
        CHECK(LaurentQ::parse(a.str()) == a);
    }
}

TEST_CASE("qfrac keeps (q-1) denominators reduced") {
    const LaurentQ qm1 = LaurentQ::q_pow(1) - LaurentQ(1);
    const QFrac x(qm1 * qint(2), 1);
    CHECK(x.is_laurent());
    CHECK(x == QFrac(qint(2)));
    const QFrac y = QFrac::inv_qm1(1) * QFrac(qm1);
    CHECK(y == QFrac(1));
    CHECK(QFrac::inv_qm1(2).valuation() == -2);
}

TEST_CASE("exp series matches factorial coefficients") {
    const int N = 9;
    const SeriesH e = SeriesH::exp_h(Rational(3, 2), N);
    for (int k = 0; k < N; ++k) {
        Rational a = 1;
        for (int i = 0; i < k; ++i) a *= Rational(3, 2);
        CHECK(e.coeff(k) == a / factorial(k));
    }
}

TEST_CASE("q - q^-1 is 2 sinh(h/2)") {
    const int N = 9;
    const SeriesH s = SeriesH::qmqi(N);
    for (int k = 0; k < N; ++k) {
        Rational want = 0;
        if (k % 2 == 1) {
            want = 2;
            for (int i = 0; i < k; ++i) want /= 2;
            want /= factorial(k);
        }
        CHECK(s.coeff(k) == want);
    }
    CHECK(s.valuation() == 1);
}

TEST_CASE("series inverse, shift and precision") {
    const int N = 8;
    const SeriesH x = SeriesH::exp_h(Rational(1), N) + SeriesH::h_pow(2, N);
    CHECK(x * x.inverse() == SeriesH(Rational(1), N));
    const SeriesH s = SeriesH::qmqi(N + 1);
    const SeriesH inv = s.inverse();
    CHECK(inv.valuation() == -1);
    CHECK((s * inv).with_prec(N - 1) == SeriesH(Rational(1), N - 1));
    CHECK(SeriesH::h_pow(1, N).shift(2) == SeriesH::h_pow(3, N + 2));
    CHECK((SeriesH::h_pow(3, N) + SeriesH::h_pow(1, 3)).is_zero() == false);
    CHECK((SeriesH::h_pow(3, N) + SeriesH(3)).is_zero());
}

TEST_CASE("in-place series addition matches the binary sum") {
    std::mt19937 g(11);
    auto rnd = [&] {
        const int prec = 3 + static_cast<int>(g() % 6);
        SeriesH x(prec);
        for (int i = 0; i < 4; ++i) {
            const int e = static_cast<int>(g() % 8) - 2;
            if (e < prec) x = x + SeriesH::h_pow(e, prec).scaled(Rational(static_cast<long>(g() % 9) - 4, 1 + g() % 3));
        }
        return x;
    };
    for (int i = 0; i < 500; ++i) {
        const SeriesH a = rnd(), b = rnd();
        SeriesH c = a;
        c += b;
        const SeriesH d = a + b;
        CHECK(c.str() == d.str());
        CHECK(c.prec() == d.prec());
    }
}

TEST_CASE("from_laurent expands q = e^(h/2)") {
    const int N = 7;
    const SeriesH x = SeriesH::from_laurent(LaurentQ::q_pow(2) + LaurentQ::q_pow(-2), N);
    // q^2 + q^-2 = 2 cosh(h)
    for (int k = 0; k < N; ++k) CHECK(x.coeff(k) == (k % 2 == 0 ? Rational(2) / factorial(k) : Rational(0)));
}
