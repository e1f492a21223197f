#include "qgroup/coeffring.hpp"

#include <algorithm>
#include <cctype>
#include <climits>

namespace qgroup {

std::string to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(std::string_view s) {
    std::string t(s);
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char ch) { return std::isspace(ch); }),
            t.end());
    if (t.empty()) throw ParseError("empty rational", 0);
    if (t.front() == '+') t.erase(t.begin());
    Rational r;
    if (r.set_str(t, 10) != 0) throw ParseError("bad rational '" + std::string(s) + "'", 0);
    r.canonicalize();
    return r;
}

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("LaurentQ coefficient overflow");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("LaurentQ coefficient overflow");
    return r;
}

// ---------------------------------------------------------------- LaurentQ

LaurentQ::LaurentQ(Int c) {
    if (c != 0) c_.push_back(c);
}

LaurentQ LaurentQ::monomial(Int c, int e) {
    LaurentQ r(c);
    if (c != 0) r.lo_ = e;
    return r;
}

void LaurentQ::trim() {
    std::size_t b = 0;
    while (b < c_.size() && c_[b] == 0) ++b;
    if (b == c_.size()) {
        c_.clear();
        lo_ = 0;
        return;
    }
    std::size_t e = c_.size();
    while (c_[e - 1] == 0) --e;
    if (b > 0 || e < c_.size()) c_ = std::vector<Int>(c_.begin() + b, c_.begin() + e);
    lo_ += static_cast<int>(b);
}

Int LaurentQ::coeff(int e) const {
    if (c_.empty() || e < lo_ || e > hi()) return 0;
    return c_[e - lo_];
}

std::size_t LaurentQ::terms() const {
    return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](Int x) { return x != 0; }));
}

LaurentQ LaurentQ::operator-() const {
    LaurentQ r = *this;
    for (auto& x : r.c_) x = checked_mul(x, -1);
    return r;
}

LaurentQ& LaurentQ::operator+=(const LaurentQ& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    int nlo = std::min(lo_, o.lo_), nhi = std::max(hi(), o.hi());
    std::vector<Int> v(static_cast<std::size_t>(nhi - nlo + 1), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[lo_ - nlo + i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
        auto& slot = v[o.lo_ - nlo + i];
        slot = checked_add(slot, o.c_[i]);
    }
    c_ = std::move(v);
    lo_ = nlo;
    trim();
    return *this;
}

LaurentQ& LaurentQ::operator-=(const LaurentQ& o) { return *this += -o; }

LaurentQ operator*(const LaurentQ& a, const LaurentQ& b) {
    if (a.is_zero() || b.is_zero()) return {};
    LaurentQ r;
    r.lo_ = a.lo_ + b.lo_;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r.c_[i + j] = checked_add(r.c_[i + j], checked_mul(a.c_[i], b.c_[j]));
    }
    r.trim();
    return r;
}

LaurentQ LaurentQ::pow(unsigned n) const {
    LaurentQ r(1), base = *this;
    while (n) {
        if (n & 1u) r *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return r;
}

LaurentQ LaurentQ::bar() const {
    LaurentQ r;
    if (is_zero()) return r;
    r.c_.assign(c_.rbegin(), c_.rend());
    r.lo_ = -hi();
    return r;
}

Int LaurentQ::sum() const {
    Int s = 0;
    for (Int x : c_) s = checked_add(s, x);
    return s;
}

Rational LaurentQ::eval_q1() const { return Rational(static_cast<long>(sum())); }

std::optional<LaurentQ> LaurentQ::div_qm1() const {
    if (is_zero()) return LaurentQ{};
    if (sum() != 0) return std::nullopt;
    // synthetic division of the shifted polynomial by (q - 1), top down
    std::size_t d = c_.size() - 1;
    LaurentQ r;
    r.lo_ = lo_;
    r.c_.assign(d, 0);
    Int carry = 0;
    for (std::size_t j = d; j >= 1; --j) {
        carry = checked_add(carry, c_[j]);
        r.c_[j - 1] = carry;
    }
    r.trim();
    return r;
}

int LaurentQ::qm1_valuation() const {
    if (is_zero()) throw std::domain_error("valuation of zero");
    int n = 0;
    LaurentQ x = *this;
    while (auto d = x.div_qm1()) {
        x = std::move(*d);
        ++n;
    }
    return n;
}

std::string LaurentQ::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        Int c = c_[i];
        if (c == 0) continue;
        int e = lo_ + static_cast<int>(i);
        Int a = c < 0 ? -c : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        if (e == 0) {
            out += std::to_string(a);
            continue;
        }
        if (a != 1) out += std::to_string(a) + "*";
        out += "q";
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

namespace {

struct LaurentParser {
    std::string_view s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char ch) {
        ws();
        if (i < s.size() && s[i] == ch) {
            ++i;
            return true;
        }
        return false;
    }
    long long integer(bool allow_sign) {
        ws();
        std::size_t start = i;
        if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        std::size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) throw ParseError("expected integer", start);
        return std::stoll(std::string(s.substr(start, i - start)));
    }
    LaurentQ term() {
        ws();
        Int c = 1;
        bool have_c = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            c = integer(false);
            have_c = true;
            if (!eat('*')) return LaurentQ(c);
        }
        ws();
        if (i < s.size() && s[i] == 'q') {
            ++i;
            int e = 1;
            if (eat('^')) e = static_cast<int>(integer(true));
            return LaurentQ::monomial(c, e);
        }
        if (have_c) throw ParseError("expected 'q' after '*'", i);
        throw ParseError("expected Laurent term", i);
    }
    LaurentQ parse() {
        LaurentQ acc;
        bool neg = false;
        ws();
        if (eat('-')) neg = true;
        else eat('+');
        acc = neg ? -term() : term();
        for (;;) {
            ws();
            if (i >= s.size()) break;
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else throw ParseError("unexpected character in Laurent polynomial", i);
        }
        return acc;
    }
};

}  // namespace

LaurentQ LaurentQ::parse(std::string_view s) { return LaurentParser{s}.parse(); }

LaurentQ qint(int n) {
    // (q^n - 1)/(q - 1): 1 + ... + q^(n-1) for n > 0, -(q^-1 + ... + q^n) for n < 0
    LaurentQ r;
    if (n > 0)
        for (int e = 0; e < n; ++e) r += LaurentQ::q_pow(e);
    else
        for (int e = n; e < 0; ++e) r -= LaurentQ::q_pow(e);
    return r;
}

std::optional<LaurentQ> divides_qm1(const LaurentQ& x, unsigned n) {
    LaurentQ y = x;
    for (unsigned k = 0; k < n; ++k) {
        auto d = y.div_qm1();
        if (!d) return std::nullopt;
        y = std::move(*d);
    }
    return y;
}

Rational eval_q1(const LaurentQ& x) { return x.eval_q1(); }

// ---------------------------------------------------------------- QFrac

QFrac::QFrac(LaurentQ n, int den) : num_(std::move(n)), den_(den) { normalize(); }

void QFrac::normalize() {
    if (num_.is_zero()) {
        den_ = 0;
        return;
    }
    if (den_ < 0) {
        num_ *= LaurentQ::monomial(1, 1) - LaurentQ(1);
        for (int k = den_ + 1; k < 0; ++k) num_ *= LaurentQ::monomial(1, 1) - LaurentQ(1);
        den_ = 0;
        return;
    }
    while (den_ > 0) {
        auto d = num_.div_qm1();
        if (!d) break;
        num_ = std::move(*d);
        --den_;
    }
}

int QFrac::valuation() const {
    if (is_zero()) return INT_MAX;
    if (den_ > 0) return -den_;
    return num_.qm1_valuation();
}

QFrac operator+(const QFrac& a, const QFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return QFrac(a.num_ + b.num_, a.den_);
    const LaurentQ t = LaurentQ::monomial(1, 1) - LaurentQ(1);
    if (a.den_ < b.den_) return QFrac(a.num_ * t.pow(b.den_ - a.den_) + b.num_, b.den_);
    return QFrac(a.num_ + b.num_ * t.pow(a.den_ - b.den_), a.den_);
}

QFrac operator*(const QFrac& a, const QFrac& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.den_ == 0 && b.den_ == 0) {
        QFrac r;
        r.num_ = a.num_ * b.num_;
        return r;
    }
    // a (q-1) factor of one numerator may cancel the other's denominator
    return QFrac(a.num_ * b.num_, a.den_ + b.den_);
}

std::string QFrac::str() const {
    if (den_ == 0) return num_.str();
    std::string d = den_ == 1 ? "(q - 1)" : "(q - 1)^" + std::to_string(den_);
    return "(" + num_.str() + ")/" + d;
}

// ---------------------------------------------------------------- SeriesH

SeriesH::SeriesH(const Rational& c, int prec) : prec_(prec), val_(0) {
    if (c != 0 && prec > 0) c_.push_back(c);
    normalize();
}

SeriesH SeriesH::h_pow(int e, int prec) {
    SeriesH r(prec);
    if (e < prec) {
        r.val_ = e;
        r.c_.push_back(1);
    }
    return r;
}

SeriesH SeriesH::exp_h(const Rational& a, int prec) {
    SeriesH r(prec);
    r.val_ = 0;
    Rational term = 1;
    for (int k = 0; k < prec; ++k) {
        r.c_.push_back(term);
        term = term * a / (k + 1);
    }
    r.normalize();
    return r;
}

SeriesH SeriesH::from_laurent(const LaurentQ& x, int prec) {
    SeriesH r(prec);
    for (int e = x.lo(); !x.is_zero() && e <= x.hi(); ++e) {
        Int c = x.coeff(e);
        if (c != 0) r += exp_h(Rational(e, 2), prec).scaled(Rational(static_cast<long>(c)));
    }
    return r;
}

SeriesH SeriesH::from_qfrac(const QFrac& x, int prec) {
    if (x.den() == 0) return from_laurent(x.num(), prec);
    // (q - 1)^-k = h^-k (1/2 + h/8 + ...)^-k; compute with headroom so that
    // the result is still known modulo h^prec
    int work = prec + 2 * x.den();
    SeriesH t = exp_h(Rational(1, 2), work + 1) - SeriesH(Rational(1), work + 1);
    SeriesH ti = t.inverse();
    SeriesH r = from_laurent(x.num(), work);
    for (int k = 0; k < x.den(); ++k) r *= ti;
    return r.with_prec(prec);
}

SeriesH SeriesH::qmqi(int prec) { return exp_h(Rational(1, 2), prec) - exp_h(Rational(-1, 2), prec); }

Rational SeriesH::coeff(int e) const {
    if (e >= prec_) throw std::domain_error("coefficient beyond truncation order");
    if (c_.empty() || e < val_ || e >= val_ + static_cast<int>(c_.size())) return 0;
    return c_[e - val_];
}

void SeriesH::normalize() {
    // drop terms at or beyond prec, then strip zeros at both ends
    if (!c_.empty()) {
        int keep = prec_ - val_;
        if (keep <= 0) c_.clear();
        else if (static_cast<int>(c_.size()) > keep) c_.resize(keep);
    }
    std::size_t b = 0;
    while (b < c_.size() && c_[b] == 0) ++b;
    if (b == c_.size()) {
        c_.clear();
        val_ = prec_;
        return;
    }
    std::size_t e = c_.size();
    while (c_[e - 1] == 0) --e;
    c_.resize(e);
    if (b > 0) c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(b));
    val_ += static_cast<int>(b);
}

SeriesH& SeriesH::operator+=(const SeriesH& o) {
    const int prec = std::min(prec_, o.prec_);
    if (o.c_.empty()) {
        if (prec < prec_) {
            prec_ = prec;
            normalize();
        }
        return *this;
    }
    if (c_.empty()) {
        const int p = prec;
        *this = o;
        prec_ = p;
        normalize();
        return *this;
    }
    prec_ = prec;
    if (o.val_ < val_) {
        c_.insert(c_.begin(), static_cast<std::size_t>(val_ - o.val_), Rational(0));
        val_ = o.val_;
    }
    const int end = std::min(prec_, o.val_ + static_cast<int>(o.c_.size()));
    if (end - val_ > static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(end - val_));
    for (int e = o.val_; e < end; ++e) {
        Rational& t = c_[static_cast<std::size_t>(e - val_)];
        mpq_add(t.get_mpq_t(), t.get_mpq_t(), o.c_[static_cast<std::size_t>(e - o.val_)].get_mpq_t());
    }
    normalize();
    return *this;
}

SeriesH SeriesH::operator-() const {
    SeriesH r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

SeriesH operator+(const SeriesH& a, const SeriesH& b) {
    SeriesH r(std::min(a.prec_, b.prec_));
    if (a.c_.empty() && b.c_.empty()) return r;
    int lo = std::min(a.valuation(), b.valuation());
    int hi = r.prec_;
    if (lo >= hi) return r;
    r.val_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        int e = a.val_ + static_cast<int>(i);
        if (e < hi) r.c_[e - lo] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
        int e = b.val_ + static_cast<int>(i);
        if (e < hi) r.c_[e - lo] += b.c_[i];
    }
    r.normalize();
    return r;
}

SeriesH operator*(const SeriesH& a, const SeriesH& b) {
    int prec = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
    SeriesH r(prec);
    if (a.c_.empty() || b.c_.empty()) return r;
    r.val_ = a.val_ + b.val_;
    int n = prec - r.val_;
    if (n <= 0) {
        r.c_.clear();
        r.val_ = prec;
        return r;
    }
    // a monomial factor only rescales the other series
    if (a.c_.size() == 1 || b.c_.size() == 1) {
        const SeriesH& m = a.c_.size() == 1 ? a : b;
        const SeriesH& o = a.c_.size() == 1 ? b : a;
        const std::size_t len = std::min(o.c_.size(), static_cast<std::size_t>(n));
        r.c_.resize(len);
        for (std::size_t i = 0; i < len; ++i) mpq_mul(r.c_[i].get_mpq_t(), o.c_[i].get_mpq_t(), m.c_[0].get_mpq_t());
        r.normalize();
        return r;
    }
    r.c_.resize(static_cast<std::size_t>(n));
    mpq_class t;
    for (std::size_t i = 0; i < a.c_.size() && static_cast<int>(i) < n; ++i)
        for (std::size_t j = 0; j < b.c_.size() && static_cast<int>(i + j) < n; ++j) {
            mpq_mul(t.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
            mpq_add(r.c_[i + j].get_mpq_t(), r.c_[i + j].get_mpq_t(), t.get_mpq_t());
        }
    r.normalize();
    return r;
}

SeriesH SeriesH::inverse() const {
    if (c_.empty()) throw std::domain_error("inverse of a series that is zero to working precision");
    // u = h^-val * this has unit constant term; invert termwise
    int n = prec_ - val_;
    std::vector<Rational> inv(static_cast<std::size_t>(n));
    inv[0] = 1 / c_[0];
    for (int k = 1; k < n; ++k) {
        Rational s = 0;
        for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) s += c_[j] * inv[k - j];
        inv[k] = -s * inv[0];
    }
    SeriesH r(prec_ - 2 * val_);
    r.val_ = -val_;
    r.c_ = std::move(inv);
    r.normalize();
    return r;
}

SeriesH SeriesH::shift(int e) const {
    SeriesH r = *this;
    r.prec_ += e;
    r.val_ += e;
    return r;
}

SeriesH SeriesH::with_prec(int p) const {
    SeriesH r = *this;
    if (p < r.prec_) {
        r.prec_ = p;
        r.normalize();
    }
    return r;
}

SeriesH SeriesH::scaled(const Rational& s) const {
    if (s == 0) return SeriesH(prec_);
    SeriesH r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

std::string SeriesH::str() const {
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const Rational& c = c_[i];
        if (c == 0) continue;
        int e = val_ + static_cast<int>(i);
        Rational a = abs(c);
        if (first)
            out += sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        first = false;
        if (e == 0) {
            out += a.get_str();
            continue;
        }
        if (a != 1) out += a.get_str() + "*";
        out += "h";
        if (e != 1) out += "^" + std::to_string(e);
    }
    out += first ? "O(h^" : " + O(h^";
    out += std::to_string(prec_) + ")";
    return out;
}

SeriesH expand_q(int N) { return SeriesH::exp_h(Rational(1, 2), N); }

}  // namespace qgroup
