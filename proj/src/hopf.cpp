#include "qgroup/hopf.hpp"

namespace qgroup {

template <class S>
TExpr<S> Hopf<S>::coproduct(const Word& w) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = dcache_.find(w);
        if (it != dcache_.end()) return it->second;
    }
    TExpr<S> r;
    if (w.empty()) r = TExpr<S>(TWord{Word{}, Word{}}, e_.one());
    else if (w.size() == 1) r = e_.gen_coproduct(w[0]);
    else r = e_.tensor_mult(coproduct(Word(w.begin(), w.end() - 1)), coproduct(Word{w.back()}));
    std::lock_guard<std::mutex> lk(mu_);
    dcache_.emplace(w, r);
    return r;
}

template <class S>
TExpr<S> Hopf<S>::coproduct(const Expr<S>& x) const {
    TExpr<S> r;
    for (const auto& [w, c] : x) r.add(coproduct(w), c);
    return r;
}

template <class S>
TExpr<S> Hopf<S>::coproduct_slot(const TExpr<S>& t, std::size_t slot) const {
    TExpr<S> out;
    for (const auto& [tw, c] : t) {
        for (const auto& [d, dc] : coproduct(tw[slot])) {
            TWord n;
            n.reserve(tw.size() + 1);
            n.insert(n.end(), tw.begin(), tw.begin() + slot);
            n.push_back(d[0]);
            n.push_back(d[1]);
            n.insert(n.end(), tw.begin() + slot + 1, tw.end());
            out.add(n, c * dc);
        }
    }
    e_.clamp(out);
    return out;
}

template <class S>
TExpr<S> Hopf<S>::iterated_coproduct(const Expr<S>& x, int n) const {
    TExpr<S> t;
    for (const auto& [w, c] : x) t.add(TWord{w}, c);
    for (int i = 0; i < n; ++i) t = coproduct_slot(t, 0);
    return t;
}

template <class S>
S Hopf<S>::counit(const Word& w) const {
    S r = e_.one();
    for (Letter l : w) r *= e_.gen_counit(l);
    return r;
}

template <class S>
S Hopf<S>::counit(const Expr<S>& x) const {
    S r = e_.from_int(0);
    for (const auto& [w, c] : x) r += c * counit(w);
    return r;
}

namespace {

// Inverse of an invertible Cartan element: a single Cartan word with unit
// coefficient, or 1 + (terms of positive h-valuation) in the formal engine.
template <class S>
std::optional<Expr<S>> cartan_inverse(const Engine<S>& e, const Expr<S>& b) {
    if (b.size() == 1) {
        const auto& [w, c] = *b.begin();
        bool cartan = true;
        for (Letter l : w) cartan = cartan && block(l) == 1 && l.kind != Kind::Xi;
        if (cartan && c == e.one()) {
            Word inv;
            for (auto it = w.rbegin(); it != w.rend(); ++it)
                inv.push_back(it->kind == Kind::KPos ? km(it->idx) : kp(it->idx));
            return e.normal_form(inv);
        }
        if (w.empty() && c == e.one()) return b;
    }
    if constexpr (std::is_same_v<S, SeriesH>) {
        const SeriesH* c0 = b.find(Word{});
        if (!c0 || !(*c0 == e.one())) return std::nullopt;
        Expr<S> d = e.scalar(e.one()) - b;  // 1 - b, h-adically small
        for (const auto& [w, c] : d)
            if (c.valuation() < 1) return std::nullopt;
        Expr<S> acc = e.scalar(e.one()), pw = e.scalar(e.one());
        for (int k = 1; k <= e.options().order + 1; ++k) {
            pw = e.mult(pw, d);
            if (pw.empty()) break;
            acc += pw;
        }
        return acc;
    }
    return std::nullopt;
}

}  // namespace

template <class S>
Expr<S> Hopf<S>::antipode(const Letter& g) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = scache_.find(g);
        if (it != scache_.end()) return it->second;
        if (!in_progress_.insert(g).second)
            throw StructuralError("antipode recursion revisits " + e_.letter_text(g));
    }
    // m (S (x) id) Delta(g) = eps(g): isolate the terms g (x) b
    const TExpr<S> d = coproduct(Word{g});
    Expr<S> self;
    Expr<S> rest = e_.scalar(e_.gen_counit(g));
    for (const auto& [tw, c] : d) {
        if (tw[0] == Word{g}) self.add(tw[1], c);
        else rest -= e_.mult(antipode(tw[0]), e_.word(tw[1])).scaled(c);
    }
    auto inv = cartan_inverse(e_, self);
    if (!inv) {
        std::lock_guard<std::mutex> lk(mu_);
        in_progress_.erase(g);
        throw StructuralError("no invertible grouplike next to " + e_.letter_text(g) + " in its coproduct");
    }
    Expr<S> r = e_.mult(rest, *inv);
    std::lock_guard<std::mutex> lk(mu_);
    in_progress_.erase(g);
    scache_.emplace(g, r);
    return r;
}

template <class S>
Expr<S> Hopf<S>::antipode(const Word& w) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = wcache_.find(w);
        if (it != wcache_.end()) return it->second;
    }
    Expr<S> r = e_.scalar(e_.one());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r = e_.mult(r, antipode(*it));
    std::lock_guard<std::mutex> lk(mu_);
    wcache_.emplace(w, r);
    return r;
}

template <class S>
Expr<S> Hopf<S>::antipode(const Expr<S>& x) const {
    Expr<S> r;
    for (const auto& [w, c] : x) r.add(antipode(w), c);
    return r;
}

template <class S>
Expr<S> Hopf<S>::id_minus_counit(const Word& w) const {
    Expr<S> r = e_.word(w);
    r.add(Word{}, -counit(w));
    return r;
}

template <class S>
TExpr<S> Hopf<S>::map_slot(const TExpr<S>& t, std::size_t slot,
                           const std::function<Expr<S>(const Word&)>& f) const {
    TExpr<S> out;
    std::map<Word, Expr<S>> memo;
    for (const auto& [tw, c] : t) {
        auto it = memo.find(tw[slot]);
        if (it == memo.end()) it = memo.emplace(tw[slot], f(tw[slot])).first;
        for (const auto& [w, d] : it->second) {
            TWord n = tw;
            n[slot] = w;
            out.add(n, c * d);
        }
    }
    e_.clamp(out);
    return out;
}

template <class S>
TExpr<S> Hopf<S>::counit_slot(const TExpr<S>& t, std::size_t slot) const {
    TExpr<S> out;
    for (const auto& [tw, c] : t) {
        TWord n = tw;
        n.erase(n.begin() + slot);
        out.add(n, c * counit(tw[slot]));
    }
    return out;
}

template <class S>
TExpr<S> Hopf<S>::flip(const TExpr<S>& t) const {
    TExpr<S> out;
    for (const auto& [tw, c] : t) out.add(TWord{tw[1], tw[0]}, c);
    return out;
}

template <class S>
Expr<S> Hopf<S>::multiply_out(const TExpr<S>& t) const {
    Expr<S> out;
    for (const auto& [tw, c] : t) {
        if (tw.empty()) {
            out.add(Word{}, c);
            continue;
        }
        Expr<S> acc = e_.normal_form(tw[0]);
        for (std::size_t i = 1; i < tw.size(); ++i) acc = e_.mult(acc, e_.word(tw[i]));
        out.add(acc, c);
    }
    e_.clamp(out);
    return out;
}

template <class S>
Expr<S> Hopf<S>::antipode_series(const Expr<S>& x, int max_terms) const {
    Expr<S> r = e_.scalar(counit(x));
    auto f = [this](const Word& w) { return id_minus_counit(w); };
    TExpr<S> u;
    for (const auto& [w, c] : x) u.add(TWord{w}, c);
    u = map_slot(u, 0, f);
    // by coassociativity (id - eps)^{(x)k} Delta^{k-1} is the reduced coproduct
    // applied to slot 0 of the previous term; the other slots are already reduced
    for (int k = 1; k <= max_terms; ++k) {
        if (k > 1) u = map_slot(map_slot(coproduct_slot(u, 0), 0, f), 1, f);
        if (u.empty()) break;
        Expr<S> m = multiply_out(u);
        r += (k % 2) ? -m : m;
    }
    return r;
}

template class Hopf<QFrac>;
template class Hopf<SeriesH>;
template class Hopf<Rational>;

// ================================================================ Pairing

std::string name(PairingConvention c) {
    switch (c) {
        case PairingConvention::CopOnMinus: return "cop-on-minus";
        case PairingConvention::Plain: return "plain";
        case PairingConvention::OpOnMinus: return "op-on-minus";
    }
    return "?";
}

const std::vector<PairingConvention>& pairing_conventions() {
    static const std::vector<PairingConvention> all{PairingConvention::OpOnMinus, PairingConvention::CopOnMinus,
                                                    PairingConvention::Plain};
    return all;
}

Pairing::Pairing(QuiverPtr q, int order, PairingConvention conv, int headroom, int xi_scale)
    : order_(order), conv_(conv), xi_scale_(xi_scale), eng_(std::move(q), EngineOptions{100000, false, order + headroom, false}), hopf_(eng_) {}

SeriesH Pairing::gen_pair(Letter a, Letter b) const {
    const int N = eng_.order();
    if (a.kind == Kind::Xi && b.kind == Kind::Xi) {
        const Quiver& q = eng_.quiver();
        int s = q.sym(q.cell_interval(a.idx), q.cell_interval(b.idx));
        return SeriesH::h_pow(-1, N).scaled(Rational(s * xi_scale_));
    }
    if (a.kind == Kind::XPlus && b.kind == Kind::XMinus && a.idx == b.idx) return SeriesH::qmqi(N + 2).inverse();
    return SeriesH(N);
}

SeriesH Pairing::pair_words(const Word& u, const Word& v) const {
    const int N = eng_.order();
    if (u.empty() || v.empty()) return SeriesH(Rational(u.empty() && v.empty() ? 1 : 0), N);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find({u, v});
        if (it != memo_.end()) return it->second;
    }
    SeriesH r(N);
    if (u.size() == 1 && v.size() == 1) {
        r = gen_pair(u[0], v[0]);
    } else if (u.size() >= 2) {
        const Word g{u[0]};
        const Word rest(u.begin() + 1, u.end());
        for (const auto& [tw, c] : hopf_.coproduct(v)) {
            const Word& first = conv_ == PairingConvention::CopOnMinus ? tw[1] : tw[0];
            const Word& second = conv_ == PairingConvention::CopOnMinus ? tw[0] : tw[1];
            SeriesH a = pair_words(g, first);
            if (a.is_zero()) continue;
            SeriesH b = pair_words(rest, second);
            if (b.is_zero()) continue;
            r += c * a * b;
        }
    } else {
        const Word h{v[0]};
        const Word rest(v.begin() + 1, v.end());
        for (const auto& [tw, c] : hopf_.coproduct(u)) {
            const Word& first = conv_ == PairingConvention::OpOnMinus ? tw[1] : tw[0];
            const Word& second = conv_ == PairingConvention::OpOnMinus ? tw[0] : tw[1];
            SeriesH a = pair_words(first, h);
            if (a.is_zero()) continue;
            SeriesH b = pair_words(second, rest);
            if (b.is_zero()) continue;
            r += c * a * b;
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(std::pair{u, v}, r);
    return r;
}

namespace {
void check_borel(const Expr<SeriesH>& x, Kind allowed, const char* side) {
    for (const auto& [w, c] : x)
        for (Letter l : w)
            if (l.kind != allowed && l.kind != Kind::Xi)
                throw std::domain_error(std::string("pairing argument is not in the ") + side + " Borel subalgebra");
}
}  // namespace

SeriesH Pairing::pair_raw(const Expr<SeriesH>& u, const Expr<SeriesH>& v) const {
    check_borel(u, Kind::XPlus, "plus");
    check_borel(v, Kind::XMinus, "minus");
    SeriesH r(eng_.order());
    for (const auto& [wu, cu] : u)
        for (const auto& [wv, cv] : v) {
            SeriesH p = pair_words(wu, wv);
            if (!p.is_zero()) r += cu * cv * p;
        }
    return r;
}

SeriesH Pairing::pair(const Expr<SeriesH>& u, const Expr<SeriesH>& v) const {
    return pair_raw(eng_.normal_form(u), eng_.normal_form(v));
}

}  // namespace qgroup
