#include "qgroup/ncalg.hpp"

#include <algorithm>
#include <cassert>

namespace qgroup {

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w) {
        h ^= l.code();
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

int to_int_exponent(const std::optional<Rational>& r, const char* what) {
    if (!r) throw StructuralError(std::string("undefined coefficient ") + what);
    if (r->get_den() != 1) throw StructuralError(std::string("non-integral exponent for ") + what);
    return static_cast<int>(r->get_num().get_si());
}

Word concat(const Word& a, const Word& b) {
    Word w;
    w.reserve(a.size() + b.size());
    w.insert(w.end(), a.begin(), a.end());
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

}  // namespace

// =================================================================== Engine

template <class S>
Engine<S>::Engine(QuiverPtr q, EngineOptions opt) : q_(std::move(q)), opt_(opt) {
    nI_ = q_->num_intervals();
    nC_ = q_->num_cells();
    if (nI_ > 255) throw ConfigError("grid too large for the word encoding");
}

template <class S>
int Engine<S>::letter_index(Letter l) const {
    switch (l.kind) {
        case Kind::XPlus: return l.idx;
        case Kind::KPos: return nI_ + l.idx;
        case Kind::KNeg: return nI_ + nC_ + l.idx;
        case Kind::Xi: return nI_ + 2 * nC_ + l.idx;
        case Kind::XMinus: return nI_ + 3 * nC_ + l.idx;
    }
    return 0;
}

template <class S>
std::vector<Letter> Engine<S>::alphabet() const {
    std::vector<Letter> out;
    for (Kind k : {Kind::XPlus, Kind::KPos, Kind::KNeg, Kind::Xi, Kind::XMinus}) {
        if (!has_kind(k)) continue;
        int n = (k == Kind::XPlus || k == Kind::XMinus) ? nI_ : nC_;
        for (int i = 0; i < n; ++i) out.push_back({k, static_cast<std::uint8_t>(i)});
    }
    return out;
}

template <class S>
bool Engine<S>::ordered(Letter a, Letter b) const {
    int ba = block(a), bb = block(b);
    if (ba != bb) return ba < bb;
    if (ba != 1) return a.idx <= b.idx;
    if (a.idx != b.idx) return a.idx < b.idx;
    return a.kind == b.kind;  // K K^-1 on one cell cancels
}

template <class S>
void Engine<S>::build_rules() {
    const int L = nI_ * 2 + nC_ * 3;
    table_.assign(static_cast<std::size_t>(L) * L, std::nullopt);
    auto al = alphabet();
    for (Letter a : al)
        for (Letter b : al)
            if (!ordered(a, b)) table_[letter_index(a) * L + letter_index(b)] = make_rule(a, b);
}

template <class S>
const Expr<S>* Engine<S>::rule(Letter a, Letter b) const {
    const int L = nI_ * 2 + nC_ * 3;
    const auto& r = table_[letter_index(a) * L + letter_index(b)];
    return r ? &*r : nullptr;
}

template <class S>
std::vector<std::pair<Word, Expr<S>>> Engine<S>::rules() const {
    std::vector<std::pair<Word, Expr<S>>> out;
    auto al = alphabet();
    for (Letter a : al)
        for (Letter b : al)
            if (auto r = rule(a, b)) out.emplace_back(Word{a, b}, *r);
    return out;
}

template <class S>
Measure Engine<S>::measure(const Word& w) const {
    int nx = 0, len = 0, sq = 0, inv = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (is_x(w[i])) {
            int l = q_->interval(w[i].idx).length();
            ++nx;
            len += l;
            sq += l * l;
        }
        for (std::size_t j = i + 1; j < w.size(); ++j)
            if (!ordered(w[i], w[j])) ++inv;
    }
    return {nx, len, -sq, inv};
}

template <class S>
bool Engine<S>::triangular(const Word& w) const {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (block(w[i - 1]) > block(w[i])) return false;
    // Cartan block sorted by cell with no cancelling neighbours
    for (std::size_t i = 1; i < w.size(); ++i)
        if (block(w[i]) == 1 && block(w[i - 1]) == 1 && !ordered(w[i - 1], w[i])) return false;
    return true;
}

template <class S>
bool Engine<S>::canonical(const Word& w) const {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!ordered(w[i - 1], w[i])) return false;
    return true;
}

template <class S>
Expr<S> Engine<S>::nf_word(const Word& w, Strategy st, Fuel& fuel) const {
    auto& cache = cache_[st == Strategy::Leftmost ? 0 : 1];
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
    }
    const std::size_t n = w.size();
    std::size_t pos = n;
    const Expr<S>* r = nullptr;
    if (n >= 2) {
        if (st == Strategy::Leftmost) {
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (!ordered(w[i], w[i + 1]) && (r = rule(w[i], w[i + 1]))) {
                    pos = i;
                    break;
                }
        } else {
            for (std::size_t i = n - 1; i-- > 0;)
                if (!ordered(w[i], w[i + 1]) && (r = rule(w[i], w[i + 1]))) {
                    pos = i;
                    break;
                }
        }
    }
    Expr<S> out;
    if (pos == n) {
        out = word(w);
    } else {
        if (--fuel.left < 0) throw NonterminationError(word_text(*fuel.root));
        Measure before = opt_.check_measure ? measure(w) : Measure{};
        for (const auto& [rw, c] : *r) {
            Word nw;
            nw.reserve(n + rw.size());
            nw.insert(nw.end(), w.begin(), w.begin() + pos);
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), w.begin() + pos + 2, w.end());
            if (opt_.check_measure && !(measure(nw) < before))
                throw StructuralError("termination measure did not decrease: " + word_text(w) + " -> " +
                                      word_text(nw));
            out.add(nf_word(nw, st, fuel), c);
        }
    }
    clamp(out);
    std::lock_guard<std::mutex> lk(mu_);
    cache.emplace(w, out);
    return out;
}

template <class S>
Expr<S> Engine<S>::normal_form(const Word& w, Strategy st) const {
    Fuel f{opt_.fuel, &w};
    return nf_word(w, st, f);
}

template <class S>
Expr<S> Engine<S>::normal_form(const Expr<S>& e, Strategy st) const {
    Expr<S> out;
    for (const auto& [w, c] : e) out.add(normal_form(w, st), c);
    clamp(out);
    return out;
}

template <class S>
Expr<S> Engine<S>::mult_raw(const Expr<S>& a, const Expr<S>& b) const {
    Expr<S> out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) out.add(concat(wa, wb), ca * cb);
    return out;
}

template <class S>
Expr<S> Engine<S>::mult(const Expr<S>& a, const Expr<S>& b) const {
    // Append b one letter at a time: every intermediate is a normal form
    // times a single letter, which keeps the memo small for long products.
    Expr<S> out;
    for (const auto& [wb, cb] : b) {
        Expr<S> cur = a.scaled(cb);
        for (Letter l : wb) {
            Expr<S> next;
            for (const auto& [w, c] : cur) {
                Word nw = w;
                nw.push_back(l);
                next.add(normal_form(nw), c);
            }
            clamp(next);
            cur = std::move(next);
        }
        out += cur;
    }
    clamp(out);
    return out;
}

template <class S>
Expr<S> Engine<S>::power(const Expr<S>& a, unsigned n) const {
    Expr<S> r = scalar(one());
    for (unsigned i = 0; i < n; ++i) r = mult(r, a);
    return r;
}

template <class S>
TExpr<S> Engine<S>::tensor(const std::vector<Expr<S>>& slots) const {
    TExpr<S> acc(TWord{}, one());
    for (const auto& s : slots) {
        TExpr<S> next;
        for (const auto& [tw, c] : acc)
            for (const auto& [w, d] : s) {
                TWord t = tw;
                t.push_back(w);
                next.add(t, c * d);
            }
        acc = std::move(next);
    }
    return acc;
}

template <class S>
TExpr<S> Engine<S>::tensor_normal_form(const TExpr<S>& t) const {
    TExpr<S> out;
    for (const auto& [tw, c] : t) {
        std::vector<Expr<S>> slots;
        slots.reserve(tw.size());
        for (const auto& w : tw) slots.push_back(normal_form(w));
        out.add(tensor(slots), c);
    }
    clamp(out);
    return out;
}

template <class S>
TExpr<S> Engine<S>::tensor_mult(const TExpr<S>& a, const TExpr<S>& b) const {
    TExpr<S> raw;
    for (const auto& [ta, ca] : a)
        for (const auto& [tb, cb] : b) {
            if (ta.size() != tb.size()) throw std::invalid_argument("tensor arity mismatch");
            TWord t(ta.size());
            for (std::size_t i = 0; i < ta.size(); ++i) t[i] = concat(ta[i], tb[i]);
            raw.add(t, ca * cb);
        }
    return tensor_normal_form(raw);
}

template <class S>
Expr<S> Engine<S>::x_times(Letter x, const Expr<S>& e, bool left) const {
    Expr<S> out;
    for (const auto& [w, c] : e) out.add(left ? concat(Word{x}, w) : concat(w, Word{x}), c);
    return out;
}

template <class S>
std::string Engine<S>::letter_text(Letter l) const {
    const Quiver& q = *q_;
    const bool cl = std::is_same_v<S, Rational>;
    switch (l.kind) {
        case Kind::XPlus: return std::string(cl ? "x+" : "X+") + q.text(l.idx);
        case Kind::XMinus: return std::string(cl ? "x-" : "X-") + q.text(l.idx);
        case Kind::KPos: return "K" + q.text(Interval{l.idx, l.idx + 1});
        case Kind::KNeg: return "K^-1" + q.text(Interval{l.idx, l.idx + 1});
        case Kind::Xi: return std::string(cl ? "xi" : "Xi") + q.text(Interval{l.idx, l.idx + 1});
    }
    return "?";
}

template <class S>
std::string Engine<S>::word_text(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if (!out.empty()) out += "*";
        out += letter_text(w[i]);
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

namespace {
template <class S>
std::string term_text(const S& c, const std::string& w) {
    std::string cs = scalar_str(c);
    if (w == "1") return cs.find_first_of(" ") == std::string::npos ? cs : "(" + cs + ")";
    if (cs == "1") return w;
    if (cs == "-1") return "-" + w;
    return "(" + cs + ")*" + w;
}
}  // namespace

template <class S>
std::string Engine<S>::expr_text(const Expr<S>& e) const {
    if (e.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : e) {
        if (!out.empty()) out += " + ";
        out += term_text(c, word_text(w));
    }
    return out;
}

template <class S>
std::string Engine<S>::tensor_text(const TExpr<S>& t) const {
    if (t.empty()) return "0";
    std::string out;
    for (const auto& [tw, c] : t) {
        if (!out.empty()) out += " + ";
        std::string ws;
        for (std::size_t i = 0; i < tw.size(); ++i) {
            if (i) ws += " (x) ";
            ws += word_text(tw[i]);
        }
        std::string cs = scalar_str(c);
        out += cs == "1" ? ws : "(" + cs + ")*" + ws;
    }
    return out;
}

template class Engine<QFrac>;
template class Engine<SeriesH>;
template class Engine<Rational>;

// =============================================================== PolyEngine

PolyEngine::PolyEngine(QuiverPtr q, EngineOptions opt) : Engine<QFrac>(std::move(q), opt) {
    t_ = QFrac(LaurentQ::q_pow(1) - LaurentQ(1));
    opqi_ = QFrac(LaurentQ(1) + LaurentQ::q_pow(-1));
    qmqi_ = QFrac(LaurentQ::q_pow(1) - LaurentQ::q_pow(-1));
    build_rules();
}

QFrac PolyEngine::from_rational(const Rational& r) const {
    if (r.get_den() != 1) throw StructuralError("non-integral scalar in the polynomial engine");
    return QFrac(static_cast<Int>(r.get_num().get_si()));
}

Expr<QFrac> PolyEngine::k_power(int interval, int p) const {
    const Interval iv = q_->interval(interval);
    Word w;
    for (int c = iv.lo; c < iv.hi; ++c)
        for (int k = 0; k < std::abs(p); ++k) w.push_back(p > 0 ? kp(c) : km(c));
    return word(w);
}

Expr<QFrac> PolyEngine::h_dot(int interval) const {
    Expr<QFrac> e = k_power(interval, 1);
    e.add(Word{}, QFrac(-1));
    return e.scaled(QFrac::inv_qm1());
}

std::optional<Expr<QFrac>> PolyEngine::make_rule(Letter a, Letter b) const {
    const Quiver& q = *q_;
    const int ba = block(a), bb = block(b);
    using E = Expr<QFrac>;
    if (ba == 1 && bb == 1) {
        if (a.idx == b.idx) return E(Word{}, QFrac(1));
        return E(Word{b, a}, QFrac(1));
    }
    if (ba == 1 && bb == 0) {
        int s = a.kind == Kind::KPos ? 1 : -1;
        return E(Word{b, a}, q_pow(s * q.cell_sym(a.idx, b.idx)));
    }
    if (ba == 2 && bb == 1) {
        int s = b.kind == Kind::KPos ? 1 : -1;
        return E(Word{b, a}, q_pow(s * q.cell_sym(b.idx, a.idx)));
    }
    if (ba == 2 && bb == 0) {
        // Xd-_beta Xd+_alpha -> Xd+_alpha Xd-_beta - [Xd+_alpha, Xd-_beta]
        const int al = b.idx, be = a.idx;
        const CoeffRow& row = q.coeffs(al, be);
        E m;
        if (al == be) m += (k_power(al, 1) - k_power(al, -1)).scaled(opqi_ * QFrac::inv_qm1());
        const int P = row.p;
        if (P != 0) {
            if (auto d = q.odiff(al, be))
                m += x_times(xp(*d), k_power(be, P), true).scaled(QFrac(P) * opqi_ * q_pow(to_int_exponent(row.cplus, "c+")));
            if (auto d = q.odiff(be, al))
                m -= x_times(xm(*d), k_power(al, P), false).scaled(QFrac(P) * opqi_ * q_pow(to_int_exponent(row.cminus, "c-")));
        }
        if (auto in = q.sinter(al, be)) {
            int u = *q.sunion(al, be);
            int bba = *q.coeffs(be, al).b, bab = *row.b;
            E mid = x_times(xm(*q.odiff(u, al)), x_times(xp(*q.odiff(u, be)), k_power(*in, bab), true), false);
            m += mid.scaled(QFrac(bba) * q_pow(bba) * qmqi_);
        }
        E r(Word{b, a}, QFrac(1));
        r -= m;
        return r;
    }
    if (ba == bb && ba != 1) {
        const bool plus = ba == 0;
        const Kind k = a.kind;
        auto rhs = [&](int al, int be) {
            E r;
            const CoeffRow& row = q.coeffs(al, be);
            if (!row.b) return r;
            if (auto s = q.osum(al, be)) {
                int sp = to_int_exponent(plus ? row.splus : row.sminus, "s");
                r.add(Word{{k, static_cast<std::uint8_t>(*s)}}, QFrac(plus ? *row.b : -*row.b) * q_pow(sp) * opqi_);
            }
            if (auto in = q.sinter(al, be)) {
                int u = *q.sunion(al, be);
                r.add(Word{{k, static_cast<std::uint8_t>(u)}, {k, static_cast<std::uint8_t>(*in)}}, QFrac(*row.b) * qmqi_);
            }
            return r;
        };
        const int L = a.idx, R = b.idx;
        if (q.in_serre(L, R)) {
            E r(Word{b, a}, q_pow(q.coeffs(L, R).r));
            r += rhs(L, R);
            return r;
        }
        if (q.in_serre(R, L)) {
            E r(Word{b, a}, QFrac(1));
            r -= rhs(R, L);
            return r.scaled(q_pow(-q.coeffs(R, L).r));
        }
        return std::nullopt;
    }
    return std::nullopt;
}

TExpr<QFrac> PolyEngine::gen_coproduct(Letter l) const {
    const Quiver& q = *q_;
    TExpr<QFrac> t;
    const Word one_w{};
    switch (l.kind) {
        case Kind::KPos:
        case Kind::KNeg: t.add(TWord{{l}, {l}}, QFrac(1)); return t;
        case Kind::XPlus: {
            const int a = l.idx;
            t.add(TWord{{l}, one_w}, QFrac(1));
            t += tensor({k_power(a, 1), word({l})});
            for (auto [be, ga] : q.decompositions(a)) {
                Rational c = Rational(q.p(be, a)) * *q.coeffs(ga, be).splus;
                if (c == 0) continue;
                t += tensor({x_times(xp(be), k_power(ga, 1), false), word({xp(ga)})}).scaled(from_rational(c) * t_);
            }
            break;
        }
        case Kind::XMinus: {
            const int a = l.idx;
            t.add(TWord{one_w, {l}}, QFrac(1));
            t += tensor({word({l}), k_power(a, -1)});
            for (auto [be, ga] : q.decompositions(a)) {
                Rational c = Rational(q.p(be, a)) * *q.coeffs(ga, be).sminus;
                if (c == 0) continue;
                t -= tensor({word({xm(be)}), x_times(xm(ga), k_power(be, -1), true)}).scaled(from_rational(c) * t_);
            }
            break;
        }
        default: throw StructuralError("letter not in the polynomial engine");
    }
    return tensor_normal_form(t);
}

QFrac PolyEngine::gen_counit(Letter l) const {
    return (l.kind == Kind::KPos || l.kind == Kind::KNeg) ? QFrac(1) : QFrac(0);
}

// ============================================================= FormalEngine

FormalEngine::FormalEngine(QuiverPtr q, EngineOptions opt) : Engine<SeriesH>(std::move(q), opt) {
    if (opt_.order < 1) throw ConfigError("truncation order must be positive");
    qmqi_ = SeriesH::qmqi(opt_.order);
    build_rules();
}

namespace {
// exp(p h Xi_a / 2) expanded cell by cell, every coefficient known mod h^prec
Expr<SeriesH> exp_cartan(const Quiver& q, int interval, const Rational& p, int prec) {
    const Interval iv = q.interval(interval);
    Expr<SeriesH> acc(Word{}, SeriesH(Rational(1), prec + 1));
    for (int c = iv.lo; c < iv.hi; ++c) {
        Expr<SeriesH> next;
        for (const auto& [w, coef] : acc) {
            Word nw = w;
            Rational f = 1;
            // each coefficient is an exact multiple of h^deg; give it matching
            // precision so that later division by h loses nothing spurious
            for (int k = 0; static_cast<int>(nw.size()) < prec; ++k) {
                const int deg = static_cast<int>(nw.size());
                next.add(nw, coef * SeriesH::h_pow(k, prec + deg).scaled(f));
                nw.push_back(xi(c));
                f = f * p / 2 / (k + 1);
            }
        }
        acc = std::move(next);
    }
    return acc;
}
}  // namespace

namespace {
template <class K>
void clamp_to(LinComb<K, SeriesH>& e, int order) {
    bool changed = false;
    for (const auto& [k, c] : e)
        if (c.prec() > order) {
            changed = true;
            break;
        }
    if (!changed) return;
    LinComb<K, SeriesH> out;
    for (const auto& [k, c] : e) out.add(k, c.with_prec(order));
    e = std::move(out);
}
}  // namespace

void FormalEngine::truncate(Expr<SeriesH>& e) const { clamp_to(e, opt_.order); }
void FormalEngine::truncate(TExpr<SeriesH>& t) const { clamp_to(t, opt_.order); }

void FormalEngine::clamp(Expr<SeriesH>& e) const {
    if (opt_.clamp) clamp_to(e, opt_.order);
}

void FormalEngine::clamp(TExpr<SeriesH>& t) const {
    if (opt_.clamp) clamp_to(t, opt_.order);
}

Expr<SeriesH> FormalEngine::k_power(int interval, int p) const {
    return exp_cartan(*q_, interval, Rational(p), opt_.order);
}

Expr<SeriesH> FormalEngine::xi_of(int interval) const {
    const Interval iv = q_->interval(interval);
    Expr<SeriesH> e;
    for (int c = iv.lo; c < iv.hi; ++c) e.add(Word{xi(c)}, one());
    return e;
}

Expr<SeriesH> FormalEngine::kk_over_qmqi(int interval) const {
    const int N = opt_.order;
    Expr<SeriesH> num = exp_cartan(*q_, interval, Rational(1), N + 1) - exp_cartan(*q_, interval, Rational(-1), N + 1);
    SeriesH inv = SeriesH::qmqi(N + 2).inverse();
    Expr<SeriesH> out;
    for (const auto& [w, c] : num) out.add(w, (c * inv).with_prec(N));
    return out;
}

std::optional<Expr<SeriesH>> FormalEngine::make_rule(Letter a, Letter b) const {
    const Quiver& q = *q_;
    const int ba = block(a), bb = block(b);
    using E = Expr<SeriesH>;
    if (ba == 1 && bb == 1) return E(Word{b, a}, one());
    if (ba == 1 && bb == 0) {
        E r(Word{b, a}, one());
        r.add(Word{b}, from_int(q.cell_sym(a.idx, b.idx)));
        return r;
    }
    if (ba == 2 && bb == 1) {
        E r(Word{b, a}, one());
        r.add(Word{a}, from_int(q.cell_sym(b.idx, a.idx)));
        return r;
    }
    if (ba == 2 && bb == 0) {
        const int al = b.idx, be = a.idx;
        const CoeffRow& row = q.coeffs(al, be);
        E m;
        if (al == be) m += kk_over_qmqi(al);
        const int P = row.p;
        if (P != 0) {
            if (auto d = q.odiff(al, be))
                m += x_times(xp(*d), k_power(be, P), true).scaled(from_int(P) * q_pow(to_int_exponent(row.cplus, "c+")));
            if (auto d = q.odiff(be, al))
                m -= x_times(xm(*d), k_power(al, P), false).scaled(from_int(P) * q_pow(to_int_exponent(row.cminus, "c-")));
        }
        if (auto in = q.sinter(al, be)) {
            int u = *q.sunion(al, be);
            int bba = *q.coeffs(be, al).b, bab = *row.b;
            E mid = x_times(xm(*q.odiff(u, al)), x_times(xp(*q.odiff(u, be)), k_power(*in, bab), true), false);
            m += mid.scaled(from_int(bba) * q_pow(bba) * qmqi_);
        }
        E r(Word{b, a}, one());
        r -= m;
        return r;
    }
    if (ba == bb && ba != 1) {
        const bool plus = ba == 0;
        const Kind k = a.kind;
        auto rhs = [&](int al, int be) {
            E r;
            const CoeffRow& row = q.coeffs(al, be);
            if (!row.b) return r;
            if (auto s = q.osum(al, be)) {
                int sp = to_int_exponent(plus ? row.splus : row.sminus, "s");
                r.add(Word{{k, static_cast<std::uint8_t>(*s)}}, from_int(plus ? *row.b : -*row.b) * q_pow(sp));
            }
            if (auto in = q.sinter(al, be)) {
                int u = *q.sunion(al, be);
                r.add(Word{{k, static_cast<std::uint8_t>(u)}, {k, static_cast<std::uint8_t>(*in)}}, from_int(*row.b) * qmqi_);
            }
            return r;
        };
        const int L = a.idx, R = b.idx;
        if (q.in_serre(L, R)) {
            E r(Word{b, a}, q_pow(q.coeffs(L, R).r));
            r += rhs(L, R);
            return r;
        }
        if (q.in_serre(R, L)) {
            E r(Word{b, a}, one());
            r -= rhs(R, L);
            return r.scaled(q_pow(-q.coeffs(R, L).r));
        }
        return std::nullopt;
    }
    return std::nullopt;
}

TExpr<SeriesH> FormalEngine::gen_coproduct(Letter l) const {
    const Quiver& q = *q_;
    TExpr<SeriesH> t;
    const Word one_w{};
    switch (l.kind) {
        case Kind::Xi:
            t.add(TWord{{l}, one_w}, one());
            t.add(TWord{one_w, {l}}, one());
            return t;
        case Kind::XPlus: {
            const int a = l.idx;
            t.add(TWord{{l}, one_w}, one());
            t += tensor({k_power(a, 1), word({l})});
            for (auto [be, ga] : q.decompositions(a)) {
                Rational c = Rational(q.p(be, a)) * *q.coeffs(ga, be).splus;
                if (c == 0) continue;
                t += tensor({x_times(xp(be), k_power(ga, 1), false), word({xp(ga)})}).scaled(from_rational(c) * qmqi_);
            }
            break;
        }
        case Kind::XMinus: {
            const int a = l.idx;
            t.add(TWord{one_w, {l}}, one());
            t += tensor({word({l}), k_power(a, -1)});
            for (auto [be, ga] : q.decompositions(a)) {
                Rational c = Rational(q.p(be, a)) * *q.coeffs(ga, be).sminus;
                if (c == 0) continue;
                t -= tensor({word({xm(be)}), x_times(xm(ga), k_power(be, -1), true)}).scaled(from_rational(c) * qmqi_);
            }
            break;
        }
        default: throw StructuralError("letter not in the formal engine");
    }
    return tensor_normal_form(t);
}

// ========================================================== ClassicalEngine

ClassicalEngine::ClassicalEngine(QuiverPtr q, EngineOptions opt) : Engine<Rational>(std::move(q), opt) {
    build_rules();
}

Expr<Rational> ClassicalEngine::xi_of(int interval) const {
    const Interval iv = q_->interval(interval);
    Expr<Rational> e;
    for (int c = iv.lo; c < iv.hi; ++c) e.add(Word{xi(c)}, Rational(1));
    return e;
}

Expr<Rational> ClassicalEngine::letter_bracket(Letter a, Letter b) const {
    const Quiver& q = *q_;
    using E = Expr<Rational>;
    const int ba = block(a), bb = block(b);
    if (ba == 1 && bb == 1) return {};
    if (ba == 1) return E(Word{b}, Rational(bb == 0 ? 1 : -1) * q.cell_sym(a.idx, b.idx));
    if (bb == 1) return -letter_bracket(b, a);
    if (ba == 2 && bb == 0) return -letter_bracket(b, a);
    if (ba == 0 && bb == 2) {
        const int al = a.idx, be = b.idx;
        E r;
        if (al == be) r += xi_of(al);
        const int P = q.p(al, be);
        if (auto d = q.odiff(al, be)) r.add(Word{xp(*d)}, Rational(P));
        if (auto d = q.odiff(be, al)) r.add(Word{xm(*d)}, Rational(-P));
        return r;
    }
    // same sign
    if (a.idx == b.idx) return {};
    const Rational sign = ba == 0 ? 1 : -1;
    auto table = [&](int al, int be) {
        E r;
        if (auto s = q.osum(al, be)) r.add(Word{{a.kind, static_cast<std::uint8_t>(*s)}}, sign * q.p(al, *s));
        return r;
    };
    if (q.in_serre(a.idx, b.idx)) return table(a.idx, b.idx);
    if (q.in_serre(b.idx, a.idx)) return -table(b.idx, a.idx);
    return {};
}

std::optional<Expr<Rational>> ClassicalEngine::make_rule(Letter a, Letter b) const {
    const int ba = block(a), bb = block(b);
    if (ba == bb && ba != 1 && !q_->in_serre(a.idx, b.idx) && !q_->in_serre(b.idx, a.idx)) return std::nullopt;
    // ab = ba + [a, b]
    Expr<Rational> r(Word{b, a}, Rational(1));
    r += letter_bracket(a, b);
    return r;
}

TExpr<Rational> ClassicalEngine::gen_coproduct(Letter l) const {
    TExpr<Rational> t;
    t.add(TWord{{l}, {}}, Rational(1));
    t.add(TWord{{}, {l}}, Rational(1));
    return t;
}

// ============================================================ presentations

Presentation parse_presentation(const std::string& s) {
    if (s == "Uq") return Presentation::Uq;
    if (s == "UqTilde") return Presentation::UqTilde;
    if (s == "UhTrunc") return Presentation::UhTrunc;
    if (s == "UhTildeTrunc") return Presentation::UhTildeTrunc;
    if (s == "ClassicalU") return Presentation::ClassicalU;
    throw ConfigError("unknown presentation '" + s + "'");
}

std::string name(Presentation p) {
    switch (p) {
        case Presentation::Uq: return "Uq";
        case Presentation::UqTilde: return "UqTilde";
        case Presentation::UhTrunc: return "UhTrunc";
        case Presentation::UhTildeTrunc: return "UhTildeTrunc";
        case Presentation::ClassicalU: return "ClassicalU";
    }
    return "?";
}

bool is_polynomial(Presentation p) { return p == Presentation::Uq || p == Presentation::UqTilde; }
bool is_formal(Presentation p) { return p == Presentation::UhTrunc || p == Presentation::UhTildeTrunc; }

std::string generator_text(const Quiver& q, Presentation p, const Generator& g) {
    const bool cl = p == Presentation::ClassicalU;
    std::string k;
    switch (g.kind) {
        case GenKind::Xi: k = cl ? "xi" : "Xi"; break;
        case GenKind::H: k = "H"; break;
        case GenKind::Kplus: k = "K"; break;
        case GenKind::Kminus: k = "K^-1"; break;
        case GenKind::Xplus: k = cl ? "x+" : "X+"; break;
        case GenKind::Xminus: k = cl ? "x-" : "X-"; break;
    }
    return k + q.text(g.iv);
}

namespace {
[[noreturn]] void bad_kind(const Quiver& q, Presentation p, const Generator& g) {
    throw ConfigError("generator " + generator_text(q, p, g) + " is not available in presentation " + name(p));
}
}  // namespace

Expr<QFrac> embed(const PolyEngine& e, Presentation p, const Generator& g) {
    const Quiver& q = e.quiver();
    const int id = q.id(g.iv);
    const bool tilde = p == Presentation::UqTilde;
    if (!is_polynomial(p)) bad_kind(q, p, g);
    switch (g.kind) {
        case GenKind::Kplus: return e.k_power(id, 1);
        case GenKind::Kminus: return e.k_power(id, -1);
        case GenKind::H: {
            if (!tilde) return e.h_dot(id);
            Expr<QFrac> r = e.k_power(id, 1);
            r.add(Word{}, QFrac(-1));
            return r;
        }
        case GenKind::Xplus:
        case GenKind::Xminus: {
            Letter l = g.kind == GenKind::Xplus ? xp(id) : xm(id);
            return Expr<QFrac>(Word{l}, tilde ? QFrac(LaurentQ::q_pow(1) - LaurentQ(1)) : QFrac(1));
        }
        default: bad_kind(q, p, g);
    }
}

Expr<SeriesH> embed(const FormalEngine& e, Presentation p, const Generator& g) {
    const Quiver& q = e.quiver();
    const int id = q.id(g.iv);
    const bool tilde = p == Presentation::UhTildeTrunc;
    if (!is_formal(p)) bad_kind(q, p, g);
    switch (g.kind) {
        case GenKind::Xi: return tilde ? e.xi_of(id).scaled(e.h_pow(1)) : e.xi_of(id);
        case GenKind::Kplus: return e.k_power(id, 1);
        case GenKind::Kminus: return e.k_power(id, -1);
        case GenKind::Xplus:
        case GenKind::Xminus: {
            Letter l = g.kind == GenKind::Xplus ? xp(id) : xm(id);
            return Expr<SeriesH>(Word{l}, tilde ? e.qmqi() : e.one());
        }
        default: bad_kind(q, p, g);
    }
}

Expr<Rational> embed(const ClassicalEngine& e, Presentation p, const Generator& g) {
    const Quiver& q = e.quiver();
    const int id = q.id(g.iv);
    if (p != Presentation::ClassicalU) bad_kind(q, p, g);
    switch (g.kind) {
        case GenKind::Xi: return e.xi_of(id);
        case GenKind::Xplus: return Expr<Rational>(Word{xp(id)}, Rational(1));
        case GenKind::Xminus: return Expr<Rational>(Word{xm(id)}, Rational(1));
        default: bad_kind(q, p, g);
    }
}

std::vector<Generator> generators(const Quiver& q, Presentation p) {
    std::vector<GenKind> kinds;
    if (is_polynomial(p)) kinds = {GenKind::H, GenKind::Kplus, GenKind::Kminus, GenKind::Xplus, GenKind::Xminus};
    else kinds = {GenKind::Xi, GenKind::Xplus, GenKind::Xminus};
    std::vector<Generator> out;
    for (GenKind k : kinds)
        for (const Interval& iv : q.intervals()) out.push_back({k, iv});
    return out;
}

std::string pres_word_text(const Quiver& q, Presentation p, const PresWord& w) {
    if (w.empty()) return "1";
    std::string out;
    for (const Generator& g : w) out += (out.empty() ? "" : "*") + generator_text(q, p, g);
    return out;
}

std::vector<PresRelation> uq_relations(const Quiver& q) {
    using PE = PresExpr<QFrac>;
    const int n = q.num_intervals();
    auto g = [&](GenKind k, int id) { return Generator{k, q.interval(id)}; };
    auto kpow = [&](int id, int p) {
        PresWord w;
        for (int i = 0; i < std::abs(p); ++i) w.push_back(g(p > 0 ? GenKind::Kplus : GenKind::Kminus, id));
        return w;
    };
    auto cat = [](std::initializer_list<PresWord> parts) {
        PresWord w;
        for (const auto& p : parts) w.insert(w.end(), p.begin(), p.end());
        return w;
    };
    const QFrac opqi(LaurentQ(1) + LaurentQ::q_pow(-1));
    const QFrac qmqi(LaurentQ::q_pow(1) - LaurentQ::q_pow(-1));
    const QFrac t(LaurentQ::q_pow(1) - LaurentQ(1));
    auto qp = [](int e) { return QFrac::q_pow(e); };
    auto exponent = [](const std::optional<Rational>& r) {
        return static_cast<int>(r->get_num().get_si());
    };
    std::vector<PresRelation> out;
    auto push = [&](std::string fam, PE d) { out.push_back({std::move(fam), std::move(d)}); };
    const GenKind kk[2] = {GenKind::Kplus, GenKind::Kminus};

    for (int a = 0; a < n; ++a) {
        push("K K^-1 = 1", PE({g(GenKind::Kplus, a), g(GenKind::Kminus, a)}, 1) - PE(PresWord{}, 1));
        push("K^-1 K = 1", PE({g(GenKind::Kminus, a), g(GenKind::Kplus, a)}, 1) - PE(PresWord{}, 1));
        PE kh({g(GenKind::Kplus, a)}, 1);
        kh.add(PresWord{}, QFrac(-1));
        kh.add({g(GenKind::H, a)}, -t);
        push("K = 1 + (q-1) H", kh);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (GenKind x : kk)
                for (GenKind y : kk)
                    push("K K commute", PE({g(x, a), g(y, b)}, 1) - PE({g(y, b), g(x, a)}, 1));
            push("H H commute", PE({g(GenKind::H, a), g(GenKind::H, b)}, 1) - PE({g(GenKind::H, b), g(GenKind::H, a)}, 1));
            if (auto s = q.osum(a, b)) {
                for (GenKind x : kk) push("K additivity", PE({g(x, *s)}, 1) - PE({g(x, a), g(x, b)}, 1));
                PE h({g(GenKind::H, *s)}, 1);
                h.add({g(GenKind::H, a), g(GenKind::Kplus, b)}, -1);
                h.add({g(GenKind::H, b)}, -1);
                push("H additivity", h);
            }
            const int sym = q.sym(a, b);
            for (int sg : {1, -1}) {
                const GenKind xk = sg > 0 ? GenKind::Xplus : GenKind::Xminus;
                PE conj({g(GenKind::Kplus, a), g(xk, b), g(GenKind::Kminus, a)}, 1);
                conj.add({g(xk, b)}, -qp(sg * sym));
                push("K X K^-1", conj);
                PE hx({g(GenKind::H, a), g(xk, b)}, 1);
                hx.add({g(xk, b), g(GenKind::H, a)}, -qp(sg * sym));
                hx.add({g(xk, b)}, -QFrac(qint(sg * sym)));
                push("H X commutator", hx);
            }
            // mixed relation
            const CoeffRow& row = q.coeffs(a, b);
            PE mx({g(GenKind::Xplus, a), g(GenKind::Xminus, b)}, 1);
            mx.add({g(GenKind::Xminus, b), g(GenKind::Xplus, a)}, -1);
            if (a == b) {
                mx.add({g(GenKind::H, a)}, -opqi);
                mx.add({g(GenKind::Kminus, a), g(GenKind::H, a)}, -opqi);
            }
            if (row.p != 0) {
                if (auto d = q.odiff(a, b))
                    mx.add(cat({{g(GenKind::Xplus, *d)}, kpow(b, row.p)}), -QFrac(row.p) * opqi * qp(exponent(row.cplus)));
                if (auto d = q.odiff(b, a))
                    mx.add(cat({kpow(a, row.p), {g(GenKind::Xminus, *d)}}), QFrac(row.p) * opqi * qp(exponent(row.cminus)));
            }
            if (auto in = q.sinter(a, b)) {
                const int u = *q.sunion(a, b);
                const int bba = *q.coeffs(b, a).b, bab = *row.b;
                mx.add(cat({{g(GenKind::Xplus, *q.odiff(u, b))}, kpow(*in, bab), {g(GenKind::Xminus, *q.odiff(u, a))}}),
                       -QFrac(bba) * qp(bba) * qmqi);
            }
            push("X+ X- commutator", mx);
            if (!q.in_serre(a, b)) continue;
            for (int sg : {1, -1}) {
                const GenKind xk = sg > 0 ? GenKind::Xplus : GenKind::Xminus;
                PE ss({g(xk, a), g(xk, b)}, 1);
                ss.add({g(xk, b), g(xk, a)}, -qp(row.r));
                if (row.b) {
                    if (auto s = q.osum(a, b))
                        ss.add({g(xk, *s)}, -QFrac(sg * *row.b) * qp(exponent(sg > 0 ? row.splus : row.sminus)) * opqi);
                    if (auto in = q.sinter(a, b))
                        ss.add({g(xk, *q.sunion(a, b)), g(xk, *in)}, -QFrac(*row.b) * qmqi);
                }
                push(sg > 0 ? "X+ X+ relation" : "X- X- relation", ss);
            }
        }
    return out;
}

// ------------------------------------------------------------ basis change

namespace {

using CartanPoly = std::map<std::vector<int>, QFrac>;

Int binom(int n, int k) {
    Int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// One coordinate of a Laurent polynomial in the cell variables K_c, rewritten
// in the integral basis b_a = H^a K^-floor(a/2), H = (K-1)/(q-1). The
// extremal exponent determines the top basis element; peel it and repeat.
std::map<int, QFrac> uq_cartan_1d(std::map<int, QFrac> f) {
    std::map<int, QFrac> out;
    const QFrac t(LaurentQ::q_pow(1) - LaurentQ(1));
    while (!f.empty()) {
        int M = f.rbegin()->first, mn = f.begin()->first;
        int a_top = M > 0 ? 2 * M - 1 : -1;
        int a_bot = mn < 0 ? -2 * mn : -1;
        int a;
        QFrac c;
        if (a_top < 0 && a_bot < 0) {
            a = 0;
            c = f.begin()->second;
        } else if (a_top > a_bot) {
            a = a_top;
            c = f.rbegin()->second;
        } else {
            a = a_bot;
            c = f.begin()->second;
        }
        QFrac d = c;
        for (int i = 0; i < a; ++i) d *= t;
        out[a] += d;
        const int shift = a / 2;
        for (int j = 0; j <= a; ++j) {
            Int bc = binom(a, j) * (((a - j) % 2) ? -1 : 1);
            auto& slot = f[j - shift];
            slot -= c * QFrac(bc);
            if (slot.is_zero()) f.erase(j - shift);
        }
    }
    return out;
}

// Same coordinate in the basis {Hbar^a : a >= 0} u {K^-b : b >= 1}, Hbar = K - 1.
std::map<int, QFrac> uqtilde_cartan_1d(const std::map<int, QFrac>& f) {
    std::map<int, QFrac> out;
    for (const auto& [m, c] : f) {
        if (m < 0) {
            out[m] += c;
            continue;
        }
        for (int a = 0; a <= m; ++a) out[a] += c * QFrac(binom(m, a));
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

CartanPoly convert_coordinates(CartanPoly poly, int ncells, bool tilde) {
    for (int c = 0; c < ncells; ++c) {
        std::map<std::vector<int>, std::map<int, QFrac>> groups;
        for (const auto& [e, v] : poly) {
            auto key = e;
            key[c] = 0;
            groups[key][e[c]] += v;
        }
        CartanPoly next;
        for (auto& [key, f] : groups) {
            for (auto it = f.begin(); it != f.end();) it = it->second.is_zero() ? f.erase(it) : std::next(it);
            auto conv = tilde ? uqtilde_cartan_1d(f) : uq_cartan_1d(std::move(f));
            for (const auto& [a, v] : conv) {
                auto k = key;
                k[c] = a;
                auto& slot = next[k];
                slot += v;
            }
        }
        poly.clear();
        for (auto& [k, v] : next)
            if (!v.is_zero()) poly.emplace(k, v);
    }
    return poly;
}

}  // namespace

BasisExpr<QFrac> to_basis(const PolyEngine& e, Presentation p, const Expr<QFrac>& x) {
    if (!is_polynomial(p)) throw ConfigError("polynomial basis requested for " + name(p));
    const bool tilde = p == Presentation::UqTilde;
    const int nc = e.quiver().num_cells();
    std::map<std::pair<Word, Word>, CartanPoly> grouped;
    for (const auto& [w, c] : x) {
        Word plus, minus;
        std::vector<int> exps(nc, 0);
        for (Letter l : w) {
            switch (l.kind) {
                case Kind::XPlus: plus.push_back(l); break;
                case Kind::XMinus: minus.push_back(l); break;
                case Kind::KPos: ++exps[l.idx]; break;
                case Kind::KNeg: --exps[l.idx]; break;
                default: break;
            }
        }
        if (!e.triangular(w)) throw StructuralError("basis change needs a normal form: " + e.word_text(w));
        grouped[{plus, minus}][exps] += c;
    }
    BasisExpr<QFrac> out;
    for (auto& [pm, poly] : grouped) {
        const int nx = static_cast<int>(pm.first.size() + pm.second.size());
        for (const auto& [codes, v] : convert_coordinates(poly, nc, tilde)) {
            BasisWord bw{pm.first, {}, pm.second};
            for (int c = 0; c < nc; ++c)
                if (codes[c] != 0) bw.cartan.emplace_back(c, codes[c]);
            out.add(bw, tilde ? v.mul_qm1_pow(-nx) : v);
        }
    }
    return out;
}

BasisExpr<SeriesH> to_basis(const FormalEngine& e, Presentation p, const Expr<SeriesH>& x) {
    if (!is_formal(p)) throw ConfigError("formal basis requested for " + name(p));
    const bool tilde = p == Presentation::UhTildeTrunc;
    const int N = e.order();
    SeriesH inv = SeriesH::qmqi(N + 2).inverse();
    BasisExpr<SeriesH> out;
    for (const auto& [w, c] : x) {
        if (!e.triangular(w)) throw StructuralError("basis change needs a normal form: " + e.word_text(w));
        BasisWord bw;
        int deg = 0;
        for (Letter l : w) {
            if (l.kind == Kind::XPlus) bw.plus.push_back(l);
            else if (l.kind == Kind::XMinus) bw.minus.push_back(l);
            else {
                ++deg;
                if (!bw.cartan.empty() && bw.cartan.back().first == l.idx) ++bw.cartan.back().second;
                else bw.cartan.emplace_back(l.idx, 1);
            }
        }
        SeriesH v = c;
        if (tilde) {
            v = v.shift(-deg);
            for (int i = 0; i < bw.x_count(); ++i) v *= inv;
        }
        out.add(bw, v);
    }
    return out;
}

std::string basis_word_text(const Quiver& q, Presentation p, const BasisWord& w) {
    std::vector<std::string> parts;
    auto xs = [&](const Word& word) {
        for (std::size_t i = 0; i < word.size();) {
            std::size_t j = i;
            while (j < word.size() && word[j] == word[i]) ++j;
            std::string s = std::string(word[i].kind == Kind::XPlus ? "X+" : "X-") + q.text(word[i].idx);
            if (j - i > 1) s += "^" + std::to_string(j - i);
            parts.push_back(s);
            i = j;
        }
    };
    auto pw = [](const std::string& s, int n) { return n == 1 ? s : s + "^" + std::to_string(n); };
    xs(w.plus);
    for (auto [cell, a] : w.cartan) {
        std::string iv = q.text(Interval{cell, cell + 1});
        if (p == Presentation::Uq) {
            parts.push_back(pw("H" + iv, a));
            if (a / 2 > 0) parts.push_back(pw("K^-1" + iv, a / 2));
        } else if (p == Presentation::UqTilde) {
            parts.push_back(a > 0 ? pw("H" + iv, a) : pw("K^-1" + iv, -a));
        } else {
            parts.push_back(pw("Xi" + iv, a));
        }
    }
    xs(w.minus);
    if (parts.empty()) return "1";
    std::string out;
    for (const auto& s : parts) out += (out.empty() ? "" : "*") + s;
    return out;
}

}  // namespace qgroup
