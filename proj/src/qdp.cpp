#include "qgroup/qdp.hpp"

#include <climits>
#include <set>
#include <sstream>

namespace qgroup {

namespace {

// (P (x) P) Delta(w) with P = id - iota eps, for a single word.
template <class S>
TExpr<S> delta2_word(const Hopf<S>& h, const Word& w) {
    const Engine<S>& e = h.engine();
    TExpr<S> out = h.coproduct(w);
    const S eps = h.counit(w);
    out.add(TWord{w, Word{}}, -e.one());
    out.add(TWord{Word{}, w}, -e.one());
    out.add(TWord{Word{}, Word{}}, eps);
    e.truncate(out);
    return out;
}

template <class S>
TExpr<S> delta_n_impl(const Hopf<S>& h, const Expr<S>& x, int n) {
    const Engine<S>& e = h.engine();
    if (n < 0) throw std::invalid_argument("delta_n needs n >= 0");
    if (n == 0) {
        TExpr<S> t;
        t.add(TWord{}, h.counit(x));
        return t;
    }
    TExpr<S> cur;
    for (const auto& [w, c] : x) {
        for (const auto& [v, d] : h.id_minus_counit(w)) cur.add(TWord{v}, c * d);
    }
    std::map<Word, TExpr<S>> memo;
    for (int k = 2; k <= n; ++k) {
        TExpr<S> next;
        for (const auto& [tw, c] : cur) {
            auto it = memo.find(tw.back());
            if (it == memo.end()) it = memo.emplace(tw.back(), delta2_word(h, tw.back())).first;
            for (const auto& [pair, d] : it->second) {
                TWord nw(tw.begin(), tw.end() - 1);
                nw.push_back(pair[0]);
                nw.push_back(pair[1]);
                next.add(nw, c * d);
            }
        }
        e.truncate(next);
        cur = std::move(next);
    }
    return cur;
}

using BasisTensor = std::vector<BasisWord>;

template <class S, class E>
LinComb<BasisTensor, S> tensor_to_basis(const E& e, Presentation p, const TExpr<S>& t) {
    std::map<Word, BasisExpr<S>> memo;
    auto conv = [&](const Word& w) -> const BasisExpr<S>& {
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, to_basis(e, p, e.word(w))).first;
        return it->second;
    };
    LinComb<BasisTensor, S> out;
    for (const auto& [tw, c] : t) {
        LinComb<BasisTensor, S> acc(BasisTensor{}, c);
        for (const Word& w : tw) {
            LinComb<BasisTensor, S> nxt;
            const BasisExpr<S>& b = conv(w);
            for (const auto& [bt, a] : acc) {
                for (const auto& [bw, d] : b) {
                    BasisTensor nt = bt;
                    nt.push_back(bw);
                    nxt.add(nt, a * d);
                }
            }
            acc = std::move(nxt);
        }
        out += acc;
    }
    return out;
}

std::string basis_tensor_text(const Quiver& q, Presentation p, const BasisTensor& bt) {
    std::string s;
    for (std::size_t i = 0; i < bt.size(); ++i) {
        if (i) s += " (x) ";
        s += basis_word_text(q, p, bt[i]);
    }
    return s.empty() ? "1" : s;
}

template <class S, class E>
MembershipReport membership_impl(const Hopf<S>& h, const E& e, Presentation basis, const Expr<S>& x, int depth,
                                 const std::string& text, const char* side) {
    MembershipReport r;
    r.element = text;
    r.side = side;
    r.depth = depth;
    r.pass = true;
    for (int n = 1; n <= depth; ++n) {
        auto b = tensor_to_basis(e, basis, delta_n(h, x, n));
        Verdict v;
        v.n = n;
        v.valuation = INT_MAX;
        for (const auto& [bt, c] : b) {
            const int val = c.valuation();
            if (val < v.valuation) {
                v.valuation = val;
                if (val < n) v.witness = "(" + scalar_str(c) + ") " + basis_tensor_text(e.quiver(), basis, bt);
            }
        }
        v.divisible = v.valuation >= n;
        r.verdicts.push_back(v);
        if (!v.divisible) {
            r.pass = false;
            break;
        }
    }
    return r;
}

std::string pair_text(const Quiver& q, Presentation p, const Generator& a, const Generator& b) {
    return "[" + generator_text(q, p, a) + ", " + generator_text(q, p, b) + "]";
}

// value at q = -1 of a Laurent polynomial
Rational eval_minus1(const LaurentQ& x) {
    Rational s = 0;
    for (int e = x.lo(); !x.is_zero() && e <= x.hi(); ++e) {
        const Int c = x.coeff(e);
        s += (e % 2 == 0) ? Rational(c) : Rational(-c);
    }
    return s;
}

}  // namespace

template <class S>
TExpr<S> delta_n(const Hopf<S>& h, const Expr<S>& x, int n) {
    return delta_n_impl(h, x, n);
}
template TExpr<QFrac> delta_n(const Hopf<QFrac>&, const Expr<QFrac>&, int);
template TExpr<SeriesH> delta_n(const Hopf<SeriesH>&, const Expr<SeriesH>&, int);
template TExpr<Rational> delta_n(const Hopf<Rational>&, const Expr<Rational>&, int);

nlohmann::json MembershipReport::json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const Verdict& d : verdicts) {
        nlohmann::json j = {{"n", d.n}, {"divisible", d.divisible}};
        if (d.valuation != INT_MAX) j["valuation"] = d.valuation;
        if (!d.witness.empty()) j["witness"] = d.witness;
        v.push_back(j);
    }
    return {{"element", element}, {"side", side}, {"depth", depth}, {"verdicts", v}, {"pass", pass}};
}

MembershipReport membership(const Hopf<QFrac>& h, const Expr<QFrac>& x, int depth, const std::string& text) {
    const auto& pe = dynamic_cast<const PolyEngine&>(h.engine());
    return membership_impl(h, pe, Presentation::Uq, x, depth, text, "q-adic");
}

MembershipReport membership(const Hopf<SeriesH>& h, const Expr<SeriesH>& x, int depth, const std::string& text) {
    const auto& fe = dynamic_cast<const FormalEngine&>(h.engine());
    if (fe.order() <= depth)
        throw std::invalid_argument("h-adic membership to depth " + std::to_string(depth) + " needs order > depth, got " +
                                    std::to_string(fe.order()));
    return membership_impl(h, fe, Presentation::UhTrunc, x, depth, text, "h-adic");
}

KInverseCertificate kinverse_certificate(const Hopf<QFrac>& h, Interval a, int N) {
    const auto& pe = dynamic_cast<const PolyEngine&>(h.engine());
    const Quiver& q = pe.quiver();
    const auto kinv = embed(pe, Presentation::UqTilde, {GenKind::Kminus, a});
    const auto hbar = embed(pe, Presentation::UqTilde, {GenKind::H, a});
    Expr<QFrac> rhs, pw = pe.scalar(QFrac(1));
    for (int n = 0; n < N; ++n) {
        rhs.add(pw, QFrac(n % 2 == 0 ? 1 : -1));
        pw = pe.mult(pw, hbar);
    }
    rhs.add(pe.mult(pw, kinv), QFrac(N % 2 == 0 ? 1 : -1));
    KInverseCertificate c;
    c.identity = pe.normal_form(rhs - kinv).empty();
    c.report = membership(h, kinv, N, "K^-1" + q.text(a));
    return c;
}

CommutativityReport commutativity_check(const PolyEngine& pe) {
    const Quiver& q = pe.quiver();
    const Presentation p = Presentation::UqTilde;
    CommutativityReport r;
    r.presentation = p;
    r.worst_valuation = INT_MAX;
    const auto gens = generators(q, p);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const auto a = embed(pe, p, gens[i]), b = embed(pe, p, gens[j]);
            const auto comm = to_basis(pe, p, pe.mult(a, b) - pe.mult(b, a));
            ++r.pairs;
            int worst = INT_MAX;
            for (const auto& [w, c] : comm) worst = std::min(worst, c.valuation());
            r.worst_valuation = std::min(r.worst_valuation, worst);
            if (worst < 1) r.failures.push_back(pair_text(q, p, gens[i], gens[j]));
            const bool mixed = gens[i].kind == GenKind::Xplus && gens[j].kind == GenKind::Xminus;
            if (mixed && gens[i].iv == gens[j].iv && worst >= 1) {
                // divisible by q - q^-1 = q^-1 (q-1)(q+1): after (q-1) the value at q = -1 must vanish
                for (const auto& [w, c] : comm) {
                    const QFrac d = c.mul_qm1_pow(-1);
                    if (!d.is_laurent() || sgn(eval_minus1(d.num())) != 0) {
                        r.qmqi_failures.push_back(pair_text(q, p, gens[i], gens[j]));
                        break;
                    }
                }
            }
        }
    }
    return r;
}

CommutativityReport commutativity_check(const FormalEngine& fe) {
    const Quiver& q = fe.quiver();
    const Presentation p = Presentation::UhTildeTrunc;
    CommutativityReport r;
    r.presentation = p;
    r.worst_valuation = INT_MAX;
    const auto gens = generators(q, p);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const auto a = embed(fe, p, gens[i]), b = embed(fe, p, gens[j]);
            const auto comm = to_basis(fe, p, fe.mult(a, b) - fe.mult(b, a));
            ++r.pairs;
            int worst = INT_MAX;
            for (const auto& [w, c] : comm) worst = std::min(worst, c.valuation());
            r.worst_valuation = std::min(r.worst_valuation, worst);
            if (worst < 1) r.failures.push_back(pair_text(q, p, gens[i], gens[j]));
        }
    }
    return r;
}

long free_commutative_count(int nx, int nk, int D) {
    // binomial with long arithmetic, small arguments only
    auto binom = [](long n, long k) {
        if (k == 0) return 1L;
        if (k < 0 || k > n) return 0L;
        long r = 1;
        for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    // points of Z^nk with l1 norm <= r
    auto ball = [&](int r) {
        long s = 0;
        for (int k = 0; k <= std::min(nk, r); ++k) s += binom(nk, k) * binom(r, k) * (1L << k);
        return s;
    };
    long total = 0;
    for (int j = 0; j <= D; ++j) total += binom(nx + j - 1, j) * ball(D - j);
    return total;
}

DualShapeReport dual_shape_check(const Hopf<QFrac>& h, int D) {
    const auto& pe = dynamic_cast<const PolyEngine&>(h.engine());
    const Quiver& q = pe.quiver();
    const Presentation p = Presentation::UqTilde;
    const int nI = q.num_intervals(), nC = q.num_cells();
    DualShapeReport r;
    r.degree = D;
    r.free_count = free_commutative_count(2 * nI, nC, D);

    std::vector<Expr<QFrac>> xplus(nI), xminus(nI), kpos(nC), kneg(nC);
    for (int i = 0; i < nI; ++i) {
        xplus[i] = embed(pe, p, {GenKind::Xplus, q.intervals()[i]});
        xminus[i] = embed(pe, p, {GenKind::Xminus, q.intervals()[i]});
    }
    for (int c = 0; c < nC; ++c) {
        kpos[c] = embed(pe, p, {GenKind::Kplus, q.interval(q.cell_interval(c))});
        kneg[c] = embed(pe, p, {GenKind::Kminus, q.interval(q.cell_interval(c))});
    }

    // Enumerate (plus multiset, k vector, minus multiset) with total degree <= D.
    std::vector<CommMono> monos;
    std::function<void(CommMono&, int, int)> rec_minus, rec_plus;
    std::function<void(CommMono&, int, int)> rec_k = [&](CommMono& m, int cell, int left) {
        if (cell == nC) {
            rec_minus(m, 0, left);
            return;
        }
        for (int e = -left; e <= left; ++e) {
            m.k[cell] = e;
            rec_k(m, cell + 1, left - std::abs(e));
        }
        m.k[cell] = 0;
    };
    rec_minus = [&](CommMono& m, int from, int left) {
        monos.push_back(m);
        if (left == 0) return;
        for (int i = from; i < nI; ++i) {
            m.minus.push_back(xm(i));
            rec_minus(m, i, left - 1);
            m.minus.pop_back();
        }
    };
    rec_plus = [&](CommMono& m, int from, int left) {
        rec_k(m, 0, left);
        if (left == 0) return;
        for (int i = from; i < nI; ++i) {
            m.plus.push_back(xp(i));
            rec_plus(m, i, left - 1);
            m.plus.pop_back();
        }
    };
    CommMono start;
    start.k.assign(nC, 0);
    rec_plus(start, 0, D);
    r.monomials = static_cast<long>(monos.size());

    // Build each monomial in reverse order (X-, K, X+, intervals descending)
    // so the comparison exercises the commutation relations at q = 1.
    auto build = [&](const CommMono& m) {
        Expr<QFrac> acc = pe.scalar(QFrac(1));
        for (auto it = m.minus.rbegin(); it != m.minus.rend(); ++it) acc = pe.mult(acc, xminus[it->idx]);
        for (int c = nC - 1; c >= 0; --c)
            for (int e = 0; e < std::abs(m.k[c]); ++e) acc = pe.mult(acc, m.k[c] > 0 ? kpos[c] : kneg[c]);
        for (auto it = m.plus.rbegin(); it != m.plus.rend(); ++it) acc = pe.mult(acc, xplus[it->idx]);
        return acc;
    };
    std::set<CommPoly::Map> images;
    for (const CommMono& m : monos) {
        const CommPoly lim = limit_uqtilde(pe, build(m));
        if (!(lim == CommPoly(m, Rational(1)))) r.failures.push_back(comm_text(q, CommPoly(m, Rational(1))) + " -> " + comm_text(q, lim));
        images.insert(lim.terms());
    }
    r.distinct = static_cast<long>(images.size());

    // Sub-coordinate rings: Delta of each generator and of each monomial
    // avoids the letters of the opposite block.
    auto avoids = [&](const TExpr<QFrac>& t, bool no_plus, bool no_minus) {
        for (const auto& [tw, c] : t)
            for (const Word& w : tw)
                for (Letter l : w)
                    if ((no_plus && l.kind == Kind::XPlus) || (no_minus && l.kind == Kind::XMinus)) return false;
        return true;
    };
    r.plus_closed = r.cartan_closed = r.minus_closed = true;
    for (const CommMono& m : monos) {
        const bool has_plus = !m.plus.empty(), has_minus = !m.minus.empty();
        if (has_plus && has_minus) continue;
        const TExpr<QFrac> d = h.coproduct(build(m));
        if (!has_minus) r.plus_closed = r.plus_closed && avoids(d, false, true);
        if (!has_plus) r.minus_closed = r.minus_closed && avoids(d, true, false);
        if (!has_plus && !has_minus) r.cartan_closed = r.cartan_closed && avoids(d, true, true);
    }
    return r;
}

}  // namespace qgroup
