// Exact scalars: Laurent polynomials in q over Z, their localization at
// (q-1), and truncated Laurent series in h with q = exp(h/2).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgroup {

using Int = std::int64_t;
using Rational = mpq_class;

std::string to_string(const Rational& r);
Rational parse_rational(std::string_view s);

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t pos() const { return pos_; }

private:
    std::size_t pos_;
};

// Laurent polynomial sum_e c_e q^e with int64 coefficients; every
// operation traps overflow instead of wrapping.
class LaurentQ {
public:
    LaurentQ() = default;
    LaurentQ(Int c);  // NOLINT: constants convert implicitly
    static LaurentQ monomial(Int c, int e);
    static LaurentQ q_pow(int e) { return monomial(1, e); }

    bool is_zero() const { return c_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    Int coeff(int e) const;
    std::size_t terms() const;

    LaurentQ operator-() const;
    LaurentQ& operator+=(const LaurentQ& o);
    LaurentQ& operator-=(const LaurentQ& o);
    friend LaurentQ operator+(LaurentQ a, const LaurentQ& b) { return a += b; }
    friend LaurentQ operator-(LaurentQ a, const LaurentQ& b) { return a -= b; }
    friend LaurentQ operator*(const LaurentQ& a, const LaurentQ& b);
    LaurentQ& operator*=(const LaurentQ& o) { return *this = *this * o; }
    bool operator==(const LaurentQ& o) const { return lo_ == o.lo_ && c_ == o.c_; }

    LaurentQ pow(unsigned n) const;
    LaurentQ bar() const;  // q -> q^-1
    Rational eval_q1() const;
    Int sum() const;  // value at q = 1 as an integer

    // exact quotient by (q-1); nullopt if x(1) != 0
    std::optional<LaurentQ> div_qm1() const;
    // largest n with (q-1)^n | x; x must be nonzero
    int qm1_valuation() const;

    std::string str() const;
    static LaurentQ parse(std::string_view s);

private:
    void trim();
    int lo_ = 0;
    std::vector<Int> c_;
};

LaurentQ qint(int n);  // (q^n - 1)/(q - 1)
std::optional<LaurentQ> divides_qm1(const LaurentQ& x, unsigned n);

// num / (q-1)^den with den >= 0, reduced so that den > 0 implies num(1) != 0.
// This is the ring Z[q,q^-1] localized at (q-1), which is all the
// polynomial presentations ever need.
class QFrac {
public:
    QFrac() = default;
    QFrac(Int c) : num_(c) {}  // NOLINT
    QFrac(LaurentQ n, int den = 0);

    static QFrac q_pow(int e) { return QFrac(LaurentQ::q_pow(e)); }
    static QFrac inv_qm1(int k = 1) { return QFrac(LaurentQ(1), k); }

    const LaurentQ& num() const { return num_; }
    int den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == 0; }
    // (q-1)-adic valuation; INT_MAX for zero
    int valuation() const;

    QFrac operator-() const { return QFrac(-num_, den_); }
    friend QFrac operator+(const QFrac& a, const QFrac& b);
    friend QFrac operator-(const QFrac& a, const QFrac& b) { return a + (-b); }
    friend QFrac operator*(const QFrac& a, const QFrac& b);
    QFrac& operator+=(const QFrac& o) { return *this = *this + o; }
    QFrac& operator-=(const QFrac& o) { return *this = *this - o; }
    QFrac& operator*=(const QFrac& o) { return *this = *this * o; }
    bool operator==(const QFrac& o) const { return den_ == o.den_ && num_ == o.num_; }

    QFrac mul_qm1_pow(int k) const { return QFrac(num_, den_ - k); }
    std::string str() const;

private:
    void normalize();
    LaurentQ num_;
    int den_ = 0;
};

// Truncated Laurent series sum c_i h^(val+i). `prec` is the absolute order:
// the value is known modulo h^prec. Products lose precision the usual way.
class SeriesH {
public:
    SeriesH() = default;
    explicit SeriesH(int prec) : prec_(prec), val_(prec) {}
    SeriesH(const Rational& c, int prec);
    static SeriesH h_pow(int e, int prec);
    static SeriesH exp_h(const Rational& a, int prec);  // exp(a h)
    static SeriesH q_pow(int e, int prec) { return exp_h(Rational(e, 2), prec); }
    static SeriesH from_laurent(const LaurentQ& x, int prec);
    static SeriesH from_qfrac(const QFrac& x, int prec);
    static SeriesH qmqi(int prec);  // q - q^-1

    int prec() const { return prec_; }
    bool is_zero() const { return c_.empty(); }
    // exponent of the leading nonzero term; prec() if zero
    int valuation() const { return c_.empty() ? prec_ : val_; }
    Rational coeff(int e) const;

    SeriesH operator-() const;
    friend SeriesH operator+(const SeriesH& a, const SeriesH& b);
    friend SeriesH operator-(const SeriesH& a, const SeriesH& b) { return a + (-b); }
    friend SeriesH operator*(const SeriesH& a, const SeriesH& b);
    SeriesH& operator+=(const SeriesH& o);
    SeriesH& operator-=(const SeriesH& o) { return *this += -o; }
    SeriesH& operator*=(const SeriesH& o) { return *this = *this * o; }
    // equality modulo the common precision
    bool operator==(const SeriesH& o) const { return (*this - o).is_zero(); }

    SeriesH inverse() const;  // requires nonzero leading coefficient
    SeriesH shift(int e) const;  // multiply by h^e
    SeriesH with_prec(int p) const;  // truncate further
    SeriesH scaled(const Rational& r) const;

    std::string str() const;

private:
    void normalize();
    int prec_ = 0;
    int val_ = 0;
    std::vector<Rational> c_;
};

SeriesH expand_q(int N);
Rational eval_q1(const LaurentQ& x);

}  // namespace qgroup
