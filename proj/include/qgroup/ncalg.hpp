// Noncommutative words, linear combinations and the PBW rewriting engines.
//
// Every presentation is realized on one of three internal engines:
//   PolyEngine       letters Xd+ (X-dot), K^{+-1}_cell, Xd-      scalars QFrac
//   FormalEngine     letters X+, Xi_cell, X-                    scalars SeriesH
//   ClassicalEngine  letters x+, xi_cell, x-                    scalars Rational
// Cartan letters live on cells only; composite Cartan generators are
// expanded on input (K_a = prod K_cell, Xi_a = sum Xi_cell).
#pragma once

#include "qgroup/coeffring.hpp"
#include "qgroup/quiver.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace qgroup {

enum class Kind : std::uint8_t { XPlus = 0, KPos = 1, KNeg = 2, Xi = 3, XMinus = 4 };

struct Letter {
    Kind kind = Kind::XPlus;
    std::uint8_t idx = 0;  // interval id for X letters, cell for Cartan letters
    constexpr std::uint16_t code() const { return static_cast<std::uint16_t>((unsigned(kind) << 8) | idx); }
    friend constexpr bool operator==(Letter a, Letter b) { return a.code() == b.code(); }
    friend constexpr auto operator<=>(Letter a, Letter b) { return a.code() <=> b.code(); }
};

inline Letter xp(int id) { return {Kind::XPlus, static_cast<std::uint8_t>(id)}; }
inline Letter xm(int id) { return {Kind::XMinus, static_cast<std::uint8_t>(id)}; }
inline Letter kp(int cell) { return {Kind::KPos, static_cast<std::uint8_t>(cell)}; }
inline Letter km(int cell) { return {Kind::KNeg, static_cast<std::uint8_t>(cell)}; }
inline Letter xi(int cell) { return {Kind::Xi, static_cast<std::uint8_t>(cell)}; }

inline int block(Letter l) {
    switch (l.kind) {
        case Kind::XPlus: return 0;
        case Kind::XMinus: return 2;
        default: return 1;
    }
}
inline bool is_x(Letter l) { return l.kind == Kind::XPlus || l.kind == Kind::XMinus; }

using Word = std::vector<Letter>;
using TWord = std::vector<Word>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(const QFrac& r) { return r.is_zero(); }
inline bool is_zero(const SeriesH& r) { return r.is_zero(); }
inline bool is_zero(const LaurentQ& r) { return r.is_zero(); }
inline std::string scalar_str(const Rational& r) { return r.get_str(); }
inline std::string scalar_str(const QFrac& r) { return r.str(); }
inline std::string scalar_str(const SeriesH& r) { return r.str(); }
inline std::string scalar_str(const LaurentQ& r) { return r.str(); }

// Finitely supported K -> S map; zero coefficients are never stored.
template <class K, class S>
class LinComb {
public:
    using Map = std::map<K, S>;
    LinComb() = default;
    LinComb(const K& k, const S& s) { add(k, s); }

    void add(const K& k, const S& s) {
        if (is_zero(s)) return;
        auto [it, fresh] = m_.try_emplace(k, s);
        if (!fresh) {
            it->second += s;
            if (is_zero(it->second)) m_.erase(it);
        }
    }
    void add(const LinComb& o, const S& s) {
        for (const auto& [k, c] : o.m_) add(k, c * s);
    }
    LinComb& operator+=(const LinComb& o) {
        for (const auto& [k, c] : o.m_) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (const auto& [k, c] : o.m_) add(k, -c);
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
    LinComb scaled(const S& s) const {
        LinComb r;
        for (const auto& [k, c] : m_) r.add(k, c * s);
        return r;
    }
    LinComb operator-() const {
        LinComb r;
        for (const auto& [k, c] : m_) r.m_.emplace(k, -c);
        return r;
    }
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }
    const Map& terms() const { return m_; }
    auto begin() const { return m_.begin(); }
    auto end() const { return m_.end(); }
    const S* find(const K& k) const {
        auto it = m_.find(k);
        return it == m_.end() ? nullptr : &it->second;
    }
    bool operator==(const LinComb& o) const { return (*this - o).empty(); }

private:
    Map m_;
};

template <class S>
using Expr = LinComb<Word, S>;
template <class S>
using TExpr = LinComb<TWord, S>;

enum class Strategy { Leftmost, Rightmost };

struct EngineOptions {
    long fuel = 10000;          // rewrite steps per normalized term
    bool check_measure = false; // assert the termination measure on every step
    int order = 8;              // truncation order for formal scalars
    bool clamp = true;          // cut formal results back to h^order after normalizing
};

class NonterminationError : public std::runtime_error {
public:
    explicit NonterminationError(const std::string& word)
        : std::runtime_error("rewrite fuel exhausted while normalizing " + word), word_(word) {}
    const std::string& word() const { return word_; }

private:
    std::string word_;
};

class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Measure = std::tuple<int, int, int, int>;

// Shared rewriting machinery. Derived engines supply the scalar constants,
// the pair rules and the generator-level Hopf data.
template <class S>
class Engine {
public:
    using Scalar = S;
    Engine(QuiverPtr q, EngineOptions opt);
    virtual ~Engine() = default;
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const Quiver& quiver() const { return *q_; }
    QuiverPtr quiver_ptr() const { return q_; }
    const EngineOptions& options() const { return opt_; }

    virtual S one() const = 0;
    virtual S from_rational(const Rational& r) const = 0;
    virtual S q_pow(int e) const = 0;
    S from_int(long n) const { return from_rational(Rational(n)); }

    // letter order and pair rules
    bool ordered(Letter a, Letter b) const;
    const Expr<S>* rule(Letter a, Letter b) const;
    std::vector<std::pair<Word, Expr<S>>> rules() const;
    Measure measure(const Word& w) const;
    bool triangular(const Word& w) const;  // X+ block, Cartan block, X- block
    bool canonical(const Word& w) const;   // no adjacent out-of-order pair at all

    Expr<S> word(const Word& w) const { return Expr<S>(w, one()); }
    Expr<S> scalar(const S& s) const { return Expr<S>(Word{}, s); }
    Expr<S> normal_form(const Word& w, Strategy st = Strategy::Leftmost) const;
    Expr<S> normal_form(const Expr<S>& e, Strategy st = Strategy::Leftmost) const;
    Expr<S> mult(const Expr<S>& a, const Expr<S>& b) const;
    Expr<S> mult_raw(const Expr<S>& a, const Expr<S>& b) const;  // concatenation only
    Expr<S> power(const Expr<S>& a, unsigned n) const;
    TExpr<S> tensor_normal_form(const TExpr<S>& t) const;
    TExpr<S> tensor_mult(const TExpr<S>& a, const TExpr<S>& b) const;
    TExpr<S> tensor(const std::vector<Expr<S>>& slots) const;

    // generator-level Hopf data, extended by the hopf module
    virtual TExpr<S> gen_coproduct(Letter l) const = 0;
    virtual S gen_counit(Letter l) const = 0;

    std::string letter_text(Letter l) const;
    std::string word_text(const Word& w) const;
    std::string expr_text(const Expr<S>& e) const;
    std::string tensor_text(const TExpr<S>& t) const;
    int letter_index(Letter l) const;
    std::vector<Letter> alphabet() const;

    // Reduce modulo the engine's truncation (a no-op for exact scalars).
    virtual void truncate(Expr<S>&) const {}
    virtual void truncate(TExpr<S>&) const {}
    // truncate, unless the engine was built with clamp off
    virtual void clamp(Expr<S>&) const {}
    virtual void clamp(TExpr<S>&) const {}
    template <class K>
    bool same(const LinComb<K, S>& a, const LinComb<K, S>& b) const {
        LinComb<K, S> d = a - b;
        truncate(d);
        return d.empty();
    }

protected:
    // Called at the end of each derived constructor.
    void build_rules();
    virtual std::optional<Expr<S>> make_rule(Letter a, Letter b) const = 0;
    virtual bool has_kind(Kind k) const = 0;

    // K_a^p as a Cartan expression (series in the formal engine)
    virtual Expr<S> k_power(int interval, int p) const = 0;
    Expr<S> x_times(Letter x, const Expr<S>& e, bool left) const;

    QuiverPtr q_;
    EngineOptions opt_;
    int nI_ = 0, nC_ = 0;

private:
    struct Fuel {
        long left;
        const Word* root;
    };
    Expr<S> nf_word(const Word& w, Strategy st, Fuel& fuel) const;

    std::vector<std::optional<Expr<S>>> table_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Word, Expr<S>, WordHash> cache_[2];
};

class PolyEngine : public Engine<QFrac> {
public:
    PolyEngine(QuiverPtr q, EngineOptions opt = {});
    QFrac one() const override { return QFrac(1); }
    QFrac from_rational(const Rational& r) const override;
    QFrac q_pow(int e) const override { return QFrac::q_pow(e); }
    TExpr<QFrac> gen_coproduct(Letter l) const override;
    QFrac gen_counit(Letter l) const override;

    Expr<QFrac> k_power(int interval, int p) const override;
    Expr<QFrac> h_dot(int interval) const;  // (K_a - 1)/(q - 1)

protected:
    std::optional<Expr<QFrac>> make_rule(Letter a, Letter b) const override;
    bool has_kind(Kind k) const override { return k != Kind::Xi; }

private:
    QFrac t_, opqi_, qmqi_;  // q-1, 1+q^-1, q-q^-1
};

class FormalEngine : public Engine<SeriesH> {
public:
    FormalEngine(QuiverPtr q, EngineOptions opt = {});
    int order() const { return opt_.order; }
    SeriesH one() const override { return SeriesH(Rational(1), opt_.order); }
    SeriesH from_rational(const Rational& r) const override { return SeriesH(r, opt_.order); }
    SeriesH q_pow(int e) const override { return SeriesH::q_pow(e, opt_.order); }
    SeriesH h_pow(int e) const { return SeriesH::h_pow(e, opt_.order); }
    SeriesH qmqi() const { return qmqi_; }
    TExpr<SeriesH> gen_coproduct(Letter l) const override;
    SeriesH gen_counit(Letter) const override { return SeriesH(opt_.order); }

    Expr<SeriesH> k_power(int interval, int p) const override;  // exp(p h Xi_a / 2)
    Expr<SeriesH> xi_of(int interval) const;                     // sum of cell Xi
    void truncate(Expr<SeriesH>& e) const override;
    void truncate(TExpr<SeriesH>& t) const override;
    void clamp(Expr<SeriesH>& e) const override;
    void clamp(TExpr<SeriesH>& t) const override;

protected:
    std::optional<Expr<SeriesH>> make_rule(Letter a, Letter b) const override;
    bool has_kind(Kind k) const override { return k == Kind::XPlus || k == Kind::XMinus || k == Kind::Xi; }

private:
    Expr<SeriesH> kk_over_qmqi(int interval) const;  // (K_a - K_a^-1)/(q - q^-1)
    SeriesH qmqi_;
};

class ClassicalEngine : public Engine<Rational> {
public:
    ClassicalEngine(QuiverPtr q, EngineOptions opt = {});
    Rational one() const override { return Rational(1); }
    Rational from_rational(const Rational& r) const override { return r; }
    Rational q_pow(int) const override { return Rational(1); }
    TExpr<Rational> gen_coproduct(Letter l) const override;
    Rational gen_counit(Letter) const override { return Rational(0); }

    Expr<Rational> k_power(int, int) const override { return scalar(Rational(1)); }
    Expr<Rational> xi_of(int interval) const;
    // [a, b] for single letters, from the relation table (drops undefined terms)
    Expr<Rational> letter_bracket(Letter a, Letter b) const;

protected:
    std::optional<Expr<Rational>> make_rule(Letter a, Letter b) const override;
    bool has_kind(Kind k) const override { return k == Kind::XPlus || k == Kind::XMinus || k == Kind::Xi; }
};

extern template class Engine<QFrac>;
extern template class Engine<SeriesH>;
extern template class Engine<Rational>;

// ----------------------------------------------------------- presentations

enum class Presentation { Uq, UqTilde, UhTrunc, UhTildeTrunc, ClassicalU };
Presentation parse_presentation(const std::string& s);
std::string name(Presentation p);
bool is_polynomial(Presentation p);
bool is_formal(Presentation p);

enum class GenKind { Xi, H, Kplus, Kminus, Xplus, Xminus };

struct Generator {
    GenKind kind;
    Interval iv;
    auto operator<=>(const Generator&) const = default;
};

std::string generator_text(const Quiver& q, Presentation p, const Generator& g);

// Image of a presentation generator in the internal engine.
Expr<QFrac> embed(const PolyEngine& e, Presentation p, const Generator& g);
Expr<SeriesH> embed(const FormalEngine& e, Presentation p, const Generator& g);
Expr<Rational> embed(const ClassicalEngine& e, Presentation p, const Generator& g);

// All generators of a presentation on the engine's grid (Cartan on all intervals).
std::vector<Generator> generators(const Quiver& q, Presentation p);

// Words in presentation generators, before any rewriting.
using PresWord = std::vector<Generator>;
template <class S>
using PresExpr = LinComb<PresWord, S>;

std::string pres_word_text(const Quiver& q, Presentation p, const PresWord& w);

// Product of the generator images, normalized in the engine.
template <class E, class S>
Expr<S> evaluate(const E& e, Presentation p, const PresExpr<S>& x) {
    Expr<S> out;
    for (const auto& [w, c] : x) {
        Expr<S> acc = e.scalar(e.one());
        for (const Generator& g : w) acc = e.mult(acc, embed(e, p, g));
        out.add(acc, c);
    }
    return out;
}

struct PresRelation {
    std::string family;
    PresExpr<QFrac> defect;  // lhs - rhs
};

// The defining relations of the polynomial presentation Uq on the quiver's
// grid, one entry per family and interval pair.
std::vector<PresRelation> uq_relations(const Quiver& q);

// Presentation bases. A basis word is an X+ word, a Cartan multi-index per
// cell and an X- word; the meaning of the Cartan exponent depends on the
// presentation:
//   Uq       a >= 1:  H^a K^-floor(a/2)         (an integral basis of Z[q^+-1][K^+-1])
//   UqTilde  a >= 1:  Hbar^a, a <= -1: K^a
//   formal   a >= 1:  Xi^a (Xibar^a for UhTildeTrunc)
struct BasisWord {
    Word plus;
    std::vector<std::pair<int, int>> cartan;  // (cell, exponent code), sorted by cell
    Word minus;
    auto operator<=>(const BasisWord&) const = default;
    int x_count() const { return static_cast<int>(plus.size() + minus.size()); }
};

template <class S>
using BasisExpr = LinComb<BasisWord, S>;

BasisExpr<QFrac> to_basis(const PolyEngine& e, Presentation p, const Expr<QFrac>& x);
BasisExpr<SeriesH> to_basis(const FormalEngine& e, Presentation p, const Expr<SeriesH>& x);
std::string basis_word_text(const Quiver& q, Presentation p, const BasisWord& w);

template <class S>
std::string basis_text(const Quiver& q, Presentation p, const BasisExpr<S>& b) {
    if (b.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : b) {
        if (!out.empty()) out += " + ";
        std::string wt = basis_word_text(q, p, w);
        out += "(" + scalar_str(c) + ")";
        if (wt != "1") out += "*" + wt;
    }
    return out;
}

}  // namespace qgroup
