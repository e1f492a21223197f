#include "qgroup/parse.hpp"

#include <cctype>

namespace qgroup {

namespace {

using Reason = ExprError::Reason;

struct PolyScalars {
    QFrac number(const Rational& r, std::size_t pos) const {
        if (r.get_den() != 1 || !r.get_num().fits_slong_p())
            throw ExprError(Reason::Scalar, "coefficient " + r.get_str() + " is not an integer", pos);
        return QFrac(static_cast<Int>(r.get_num().get_si()));
    }
    QFrac q() const { return QFrac::q_pow(1); }
    QFrac h(std::size_t pos) const { throw ExprError(Reason::Scalar, "h needs a formal presentation", pos); }
    // units of Z[q^+-1] localized at (q-1): +-q^e (q-1)^m
    std::optional<QFrac> inverse(const QFrac& x) const {
        if (x.is_zero()) return std::nullopt;
        LaurentQ n = x.num();
        int m = -x.den();
        while (auto d = n.div_qm1()) {
            n = *d;
            ++m;
        }
        if (n.terms() != 1 || (n.coeff(n.lo()) != 1 && n.coeff(n.lo()) != -1)) return std::nullopt;
        return QFrac(LaurentQ::monomial(n.coeff(n.lo()), -n.lo()), m);
    }
};

struct FormalScalars {
    int order;
    SeriesH number(const Rational& r, std::size_t) const { return SeriesH(r, order); }
    SeriesH q() const { return SeriesH::q_pow(1, order); }
    SeriesH h(std::size_t) const { return SeriesH::h_pow(1, order); }
    std::optional<SeriesH> inverse(const SeriesH& x) const {
        if (x.is_zero()) return std::nullopt;
        return x.inverse();
    }
};

struct ClassicalScalars {
    Rational number(const Rational& r, std::size_t) const { return r; }
    Rational q() const { return Rational(1); }
    Rational h(std::size_t pos) const { throw ExprError(Reason::Scalar, "h needs a formal presentation", pos); }
    std::optional<Rational> inverse(const Rational& x) const {
        if (sgn(x) == 0) return std::nullopt;
        return Rational(1) / x;
    }
};

bool allowed(Presentation p, GenKind k, bool lower) {
    if (p == Presentation::ClassicalU)
        return lower && (k == GenKind::Xi || k == GenKind::Xplus || k == GenKind::Xminus);
    if (lower) return false;
    switch (k) {
        case GenKind::Xplus:
        case GenKind::Xminus:
        case GenKind::Kplus:
        case GenKind::Kminus: return true;
        case GenKind::H: return is_polynomial(p);
        case GenKind::Xi: return is_formal(p);
    }
    return false;
}

template <class S, class Sc>
class Parser {
public:
    Parser(std::string_view t, const Quiver& q, Presentation p, Sc sc) : t_(t), q_(q), p_(p), sc_(sc) {}

    PresExpr<S> run() {
        PresExpr<S> e = expr();
        skip();
        if (i_ != t_.size()) fail("unexpected '" + std::string(1, t_[i_]) + "'");
        return e;
    }

private:
    using E = PresExpr<S>;

    [[noreturn]] void fail(const std::string& msg) const { throw ExprError(Reason::Syntax, msg, i_); }
    void skip() {
        while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < t_.size() && t_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool lookahead(std::string_view s) const { return t_.substr(i_, s.size()) == s; }

    E scalar(const S& s) const { return E(PresWord{}, s); }
    E one() const { return scalar(sc_.number(Rational(1), 0)); }
    E product(const E& a, const E& b) const {
        E r;
        for (const auto& [u, c] : a)
            for (const auto& [v, d] : b) {
                PresWord w = u;
                w.insert(w.end(), v.begin(), v.end());
                r.add(w, c * d);
            }
        return r;
    }

    E expr() {
        E acc;
        bool neg = eat('-');
        E t = term();
        acc.add(t, sc_.number(Rational(neg ? -1 : 1), i_));
        for (;;) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }
    E term() {
        E acc = factor();
        while (eat('*')) acc = product(acc, factor());
        return acc;
    }
    E factor() {
        E base = atom();
        for (;;) {
            skip();
            // K^-1 is consumed by the generator lexer, so '^' here is a power
            if (!eat('^')) return base;
            skip();
            const std::size_t at = i_;
            bool neg = eat('-');
            skip();
            std::size_t j = i_;
            while (j < t_.size() && std::isdigit(static_cast<unsigned char>(t_[j]))) ++j;
            if (j == i_) fail("expected an integer exponent");
            const int n = std::stoi(std::string(t_.substr(i_, j - i_)));
            i_ = j;
            if (n > 64) throw ExprError(Reason::Syntax, "exponent too large", at);
            if (neg) {
                const S* s = base.size() == 1 ? base.find(PresWord{}) : nullptr;
                auto inv = s ? sc_.inverse(*s) : std::nullopt;
                if (!inv) throw ExprError(Reason::Scalar, "negative power of a non-invertible factor", at);
                base = scalar(*inv);
            }
            E r = one();
            for (int k = 0; k < n; ++k) r = product(r, base);
            base = std::move(r);
        }
    }
    E atom() {
        skip();
        if (i_ >= t_.size()) fail("unexpected end of input");
        const char c = t_[i_];
        if (c == '(') {
            ++i_;
            E e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (auto g = generator()) return E(PresWord{*g}, sc_.number(Rational(1), i_));
        if (c == 'q') {
            ++i_;
            return scalar(sc_.q());
        }
        if (c == 'h') {
            const std::size_t at = i_++;
            return scalar(sc_.h(at));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < t_.size() && std::isalpha(static_cast<unsigned char>(t_[j]))) ++j;
            if (j < t_.size() && (t_[j] == '[' || t_[j] == '+' || t_[j] == '-'))
                throw ExprError(Reason::UnknownGenerator, "unknown generator " + std::string(t_.substr(i_, j - i_)), i_);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    E number() {
        const std::size_t at = i_;
        std::size_t j = i_;
        auto digits = [&] {
            while (j < t_.size() && std::isdigit(static_cast<unsigned char>(t_[j]))) ++j;
        };
        digits();
        if (j < t_.size() && t_[j] == '/') {
            ++j;
            const std::size_t k = j;
            digits();
            if (j == k) {
                i_ = j;
                fail("expected a denominator");
            }
        }
        i_ = j;
        Rational r;
        try {
            r = parse_rational(t_.substr(at, j - at));
        } catch (const ParseError&) {
            throw ExprError(Reason::Syntax, "bad number", at);
        }
        return scalar(sc_.number(r, at));
    }
    Rational endpoint() {
        skip();
        const std::size_t at = i_;
        std::size_t j = i_;
        if (j < t_.size() && t_[j] == '-') ++j;
        while (j < t_.size() && (std::isdigit(static_cast<unsigned char>(t_[j])) || t_[j] == '/' || t_[j] == '.')) ++j;
        if (j == at) fail("expected an endpoint");
        i_ = j;
        try {
            return parse_rational(t_.substr(at, j - at));
        } catch (const ParseError&) {
            throw ExprError(Reason::Syntax, "bad endpoint", at);
        }
    }
    std::optional<Generator> generator() {
        struct Name {
            std::string_view text;
            GenKind kind;
            bool lower;
        };
        // longest names first
        static constexpr Name names[] = {
            {"K^-1", GenKind::Kminus, false}, {"X+", GenKind::Xplus, false}, {"X-", GenKind::Xminus, false},
            {"Xi", GenKind::Xi, false},       {"x+", GenKind::Xplus, true},  {"x-", GenKind::Xminus, true},
            {"xi", GenKind::Xi, true},        {"H", GenKind::H, false},      {"K", GenKind::Kplus, false},
        };
        const std::size_t at = i_;
        for (const Name& n : names) {
            if (!lookahead(n.text)) continue;
            std::size_t j = i_ + n.text.size();
            while (j < t_.size() && std::isspace(static_cast<unsigned char>(t_[j]))) ++j;
            if (j >= t_.size() || t_[j] != '[') continue;
            if (!allowed(p_, n.kind, n.lower))
                throw ExprError(Reason::UnknownGenerator,
                                "generator " + std::string(n.text) + " is not part of " + name(p_), at);
            i_ = j + 1;
            const std::size_t lo_at = i_;
            const Rational lo = endpoint();
            expect(',');
            const std::size_t hi_at = i_;
            const Rational hi = endpoint();
            expect(')');
            const auto a = q_.grid().index_of(lo);
            if (!a) throw ExprError(Reason::OffGrid, "endpoint " + lo.get_str() + " is not a grid breakpoint", lo_at);
            const auto b = q_.grid().index_of(hi);
            if (!b) throw ExprError(Reason::OffGrid, "endpoint " + hi.get_str() + " is not a grid breakpoint", hi_at);
            if (*a >= *b) throw ExprError(Reason::OffGrid, "empty interval", at);
            return Generator{n.kind, Interval{*a, *b}};
        }
        return std::nullopt;
    }

    std::string_view t_;
    const Quiver& q_;
    Presentation p_;
    Sc sc_;
    std::size_t i_ = 0;
};

}  // namespace

PresExpr<QFrac> parse_poly(std::string_view text, const Quiver& q, Presentation p) {
    if (!is_polynomial(p)) throw std::invalid_argument("parse_poly needs a polynomial presentation");
    return Parser<QFrac, PolyScalars>(text, q, p, {}).run();
}

PresExpr<SeriesH> parse_formal(std::string_view text, const Quiver& q, Presentation p, int order) {
    if (!is_formal(p)) throw std::invalid_argument("parse_formal needs a formal presentation");
    return Parser<SeriesH, FormalScalars>(text, q, p, FormalScalars{order}).run();
}

PresExpr<Rational> parse_classical(std::string_view text, const Quiver& q) {
    return Parser<Rational, ClassicalScalars>(text, q, Presentation::ClassicalU, {}).run();
}

}  // namespace qgroup
