#include "qgroup/classical.hpp"

namespace qgroup {

LieElem to_lie(const Expr<Rational>& e) {
    LieElem out;
    for (const auto& [w, c] : e) {
        if (w.size() != 1) throw StructuralError("element is not of degree one");
        out.add(w[0], c);
    }
    return out;
}

Expr<Rational> from_lie(const LieElem& e) {
    Expr<Rational> out;
    for (const auto& [l, c] : e) out.add(Word{l}, c);
    return out;
}

Lie2 to_lie2(const TExpr<Rational>& t) {
    Lie2 out;
    for (const auto& [tw, c] : t) {
        if (tw.size() != 2 || tw[0].size() != 1 || tw[1].size() != 1)
            throw StructuralError("tensor is not in g (x) g");
        out.add({tw[0][0], tw[1][0]}, c);
    }
    return out;
}

LieBialgebra::LieBialgebra(QuiverPtr q) : eng_(std::move(q)) {}

LieElem LieBialgebra::xi(int interval) const { return to_lie(eng_.xi_of(interval)); }
LieElem LieBialgebra::xplus(int interval) const { return LieElem(xp(interval), 1); }
LieElem LieBialgebra::xminus(int interval) const { return LieElem(xm(interval), 1); }

std::vector<Letter> LieBialgebra::basis() const { return eng_.alphabet(); }

LieElem LieBialgebra::bracket(const LieElem& a, const LieElem& b) const {
    LieElem out;
    for (const auto& [la, ca] : a)
        for (const auto& [lb, cb] : b) out.add(to_lie(eng_.letter_bracket(la, lb)), ca * cb);
    return out;
}

Lie2 LieBialgebra::wedge(const LieElem& a, const LieElem& b) const {
    Lie2 out;
    const Rational half(1, 2);
    for (const auto& [la, ca] : a)
        for (const auto& [lb, cb] : b) {
            out.add({la, lb}, ca * cb * half);
            out.add({lb, la}, -ca * cb * half);
        }
    return out;
}

Lie2 LieBialgebra::cobracket(Letter l) const {
    if (l.kind == Kind::Xi) return {};
    const Quiver& q = quiver();
    const int a = l.idx;
    const Kind k = l.kind;
    auto x = [&](int id) { return LieElem(Letter{k, static_cast<std::uint8_t>(id)}, 1); };
    Lie2 out = wedge(xi(a), x(a));
    for (auto [be, ga] : q.decompositions(a)) out.add(wedge(x(be), x(ga)), Rational(q.p(be, a)));
    return out;
}

Lie2 LieBialgebra::cobracket(const LieElem& a) const {
    Lie2 out;
    for (const auto& [l, c] : a) out.add(cobracket(l), c);
    return out;
}

Lie2 LieBialgebra::ad(const LieElem& a, const Lie2& t) const {
    Lie2 out;
    for (const auto& [xy, c] : t) {
        for (const auto& [l, d] : bracket(a, LieElem(xy[0], 1))) out.add({l, xy[1]}, c * d);
        for (const auto& [l, d] : bracket(a, LieElem(xy[1], 1))) out.add({xy[0], l}, c * d);
    }
    return out;
}

LieElem LieBialgebra::jacobi_defect(Letter a, Letter b, Letter c) const {
    const LieElem A(a, 1), B(b, 1), C(c, 1);
    return bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B));
}

Lie3 LieBialgebra::cojacobi_defect(Letter a) const {
    Lie3 t;
    for (const auto& [xy, c] : cobracket(a))
        for (const auto& [uv, d] : cobracket(xy[0])) t.add({uv[0], uv[1], xy[1]}, c * d);
    Lie3 out;
    for (const auto& [w, c] : t) {
        out.add(w, c);
        out.add({w[1], w[2], w[0]}, c);
        out.add({w[2], w[0], w[1]}, c);
    }
    return out;
}

Lie2 LieBialgebra::cocycle_defect(Letter a, Letter b) const {
    const LieElem A(a, 1), B(b, 1);
    return cobracket(bracket(A, B)) - ad(A, cobracket(b)) + ad(B, cobracket(a));
}

std::string LieBialgebra::text(const LieElem& e) const { return eng_.expr_text(from_lie(e)); }

std::string LieBialgebra::text(const Lie2& t) const {
    TExpr<Rational> te;
    for (const auto& [xy, c] : t) te.add(TWord{{xy[0]}, {xy[1]}}, c);
    return eng_.tensor_text(te);
}

// ------------------------------------------------------------- limits

int CommMono::degree() const {
    int d = static_cast<int>(plus.size() + minus.size());
    for (int e : k) d += std::abs(e);
    return d;
}

std::string comm_text(const Quiver& q, const CommPoly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : p) {
        std::vector<std::string> parts;
        for (Letter l : m.plus) parts.push_back("X+" + q.text(l.idx));
        for (std::size_t cell = 0; cell < m.k.size(); ++cell)
            if (m.k[cell] != 0)
                parts.push_back("K" + q.text(Interval{int(cell), int(cell) + 1}) +
                                (m.k[cell] == 1 ? "" : "^" + std::to_string(m.k[cell])));
        for (Letter l : m.minus) parts.push_back("X-" + q.text(l.idx));
        std::string w;
        for (const auto& s : parts) w += (w.empty() ? "" : "*") + s;
        if (!out.empty()) out += " + ";
        out += c.get_str();
        if (!w.empty()) out += "*" + w;
    }
    return out;
}

namespace {

Rational at_q1(const QFrac& c, const std::string& where) {
    if (c.valuation() < 0) throw ValuationError("pole at q = 1 in the coefficient of " + where);
    return c.num().eval_q1();
}

Rational at_h0(const SeriesH& c, const std::string& where) {
    if (c.valuation() < 0) throw ValuationError("negative h-valuation in the coefficient of " + where);
    return c.coeff(0);
}

Int binom(int n, int k) {
    Int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Laurent polynomial in the cell K's of one UqTilde basis word's Cartan part.
std::map<std::vector<int>, Rational> cartan_poly(const BasisWord& w, int ncells) {
    std::map<std::vector<int>, Rational> acc{{std::vector<int>(ncells, 0), Rational(1)}};
    for (auto [cell, a] : w.cartan) {
        std::map<int, Rational> f;
        if (a < 0) f[a] = 1;
        else
            for (int j = 0; j <= a; ++j) f[j] = Rational(binom(a, j) * (((a - j) % 2) ? -1 : 1));
        std::map<std::vector<int>, Rational> next;
        for (const auto& [e, c] : acc)
            for (const auto& [j, d] : f) {
                auto k = e;
                k[cell] += j;
                next[k] += c * d;
            }
        acc.clear();
        for (auto& [k, c] : next)
            if (c != 0) acc.emplace(k, c);
    }
    return acc;
}

CommPoly comm_from_basis(const Quiver& q, const BasisExpr<QFrac>& b, int qm1_shift) {
    CommPoly out;
    for (const auto& [w, c] : b) {
        Rational v = at_q1(c.mul_qm1_pow(-qm1_shift), basis_word_text(q, Presentation::UqTilde, w));
        if (v == 0) continue;
        for (const auto& [k, d] : cartan_poly(w, q.num_cells())) out.add(CommMono{w.plus, k, w.minus}, v * d);
    }
    return out;
}

// Letters of a basis word's linear reading, or nullopt when the word is in I^2
// (the empty optional vector stands for the constant term).
std::optional<std::vector<Letter>> formal_reading(const BasisWord& w) {
    std::vector<Letter> ls;
    for (Letter l : w.plus) ls.push_back(l);
    for (auto [cell, a] : w.cartan)
        for (int i = 0; i < a; ++i) ls.push_back(xi(cell));
    for (Letter l : w.minus) ls.push_back(l);
    if (ls.size() > 1) return std::nullopt;
    return ls;
}

Cotangent cotangent_formal(const Quiver& q, const BasisExpr<SeriesH>& b, int h_shift) {
    Cotangent out{Rational(0), {}};
    for (const auto& [w, c] : b) {
        auto r = formal_reading(w);
        if (!r) continue;
        Rational v = at_h0(c.shift(-h_shift), basis_word_text(q, Presentation::UhTildeTrunc, w));
        if (r->empty()) out.constant += v;
        else out.linear.add((*r)[0], v);
    }
    return out;
}

LieElem double_x(const LieElem& e) {
    LieElem out;
    for (const auto& [l, c] : e) out.add(l, is_x(l) ? c * 2 : c);
    return out;
}

// Basis word of Uq -> word of U(g): H-basis exponent a -> xi^a, Xd -> x (the
// factor 2 per X letter is returned separately).
Word uq_word_to_classical(const BasisWord& w, int& nx) {
    Word out;
    for (Letter l : w.plus) out.push_back(l);
    for (auto [cell, a] : w.cartan)
        for (int i = 0; i < a; ++i) out.push_back(xi(cell));
    for (Letter l : w.minus) out.push_back(l);
    nx = w.x_count();
    return out;
}

Rational pow2(int n) {
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= 2;
    return r;
}

}  // namespace

Expr<Rational> limit_uq(const PolyEngine& pe, const ClassicalEngine& ce, const Expr<QFrac>& x) {
    const Quiver& q = pe.quiver();
    Expr<Rational> out;
    for (const auto& [w, c] : to_basis(pe, Presentation::Uq, pe.normal_form(x))) {
        Rational v = at_q1(c, basis_word_text(q, Presentation::Uq, w));
        int nx = 0;
        Word cw = uq_word_to_classical(w, nx);
        out.add(cw, v * pow2(nx));
    }
    return ce.normal_form(out);
}

CommPoly limit_uqtilde(const PolyEngine& pe, const Expr<QFrac>& x) {
    return comm_from_basis(pe.quiver(), to_basis(pe, Presentation::UqTilde, pe.normal_form(x)), 0);
}

Cotangent cotangent(const Quiver&, const CommPoly& p) {
    Cotangent out{Rational(0), {}};
    for (const auto& [m, c] : p) {
        const std::size_t nx = m.plus.size() + m.minus.size();
        if (nx >= 2) continue;
        if (nx == 1) {
            out.linear.add(m.plus.empty() ? m.minus[0] : m.plus[0], c);
            continue;
        }
        // K^m = prod (1 + Hbar)^m_i = 1 + sum m_i Hbar_i mod I^2
        out.constant += c;
        for (std::size_t cell = 0; cell < m.k.size(); ++cell)
            if (m.k[cell] != 0) out.linear.add(xi(static_cast<int>(cell)), c * m.k[cell]);
    }
    return out;
}

Cotangent cotangent_uhtilde(const FormalEngine& fe, const Expr<SeriesH>& x) {
    return cotangent_formal(fe.quiver(), to_basis(fe, Presentation::UhTildeTrunc, fe.normal_form(x)), 0);
}

LieElem first_order_bracket_uqtilde(const PolyEngine& pe, const Expr<QFrac>& a, const Expr<QFrac>& b) {
    const Expr<QFrac> comm = pe.mult(a, b) - pe.mult(b, a);
    const CommPoly p = comm_from_basis(pe.quiver(), to_basis(pe, Presentation::UqTilde, comm), 1);
    return double_x(cotangent(pe.quiver(), p).linear);
}

LieElem first_order_bracket_uhtilde(const FormalEngine& fe, const Expr<SeriesH>& a, const Expr<SeriesH>& b) {
    Expr<SeriesH> comm = fe.mult(a, b) - fe.mult(b, a);
    fe.truncate(comm);
    return cotangent_formal(fe.quiver(), to_basis(fe, Presentation::UhTildeTrunc, comm), 1).linear;
}

TExpr<Rational> first_order_cobracket_uq(const Hopf<QFrac>& h, const ClassicalEngine& ce, const Expr<QFrac>& x) {
    const auto& pe = dynamic_cast<const PolyEngine&>(h.engine());
    const TExpr<QFrac> d = h.coproduct(x);
    const TExpr<QFrac> t = d - h.flip(d);
    TExpr<QFrac> acc;
    for (const auto& [tw, c] : t) {
        auto b0 = to_basis(pe, Presentation::Uq, pe.word(tw[0]));
        auto b1 = to_basis(pe, Presentation::Uq, pe.word(tw[1]));
        for (const auto& [w0, c0] : b0)
            for (const auto& [w1, c1] : b1) {
                int n0 = 0, n1 = 0;
                Word u = uq_word_to_classical(w0, n0), v = uq_word_to_classical(w1, n1);
                // keep the exact coefficient until everything is collected
                acc.add(TWord{u, v}, c * c0 * c1 * QFrac(static_cast<Int>(1) << (n0 + n1)));
            }
    }
    TExpr<Rational> out;
    for (const auto& [tw, c] : acc)
        out.add(tw, at_q1(c.mul_qm1_pow(-1), ce.word_text(tw[0]) + " (x) " + ce.word_text(tw[1])));
    return ce.tensor_normal_form(out);
}

Lie2 cobracket_uhtilde(const Hopf<SeriesH>& h, const Expr<SeriesH>& x, TExpr<Rational>* residual) {
    const auto& fe = dynamic_cast<const FormalEngine&>(h.engine());
    const TExpr<SeriesH> d = h.coproduct(x);
    TExpr<SeriesH> t = d - h.flip(d);
    fe.truncate(t);
    std::map<std::pair<std::vector<Letter>, std::vector<Letter>>, SeriesH> acc;
    for (const auto& [tw, c] : t) {
        auto b0 = to_basis(fe, Presentation::UhTildeTrunc, fe.word(tw[0]));
        auto b1 = to_basis(fe, Presentation::UhTildeTrunc, fe.word(tw[1]));
        for (const auto& [w0, c0] : b0) {
            auto r0 = formal_reading(w0);
            if (!r0) continue;
            for (const auto& [w1, c1] : b1) {
                auto r1 = formal_reading(w1);
                if (!r1) continue;
                auto key = std::pair{*r0, *r1};
                SeriesH v = c * c0 * c1;
                auto it = acc.find(key);
                if (it == acc.end()) acc.emplace(key, v);
                else it->second += v;
            }
        }
    }
    Lie2 out;
    for (const auto& [key, c] : acc) {
        Rational v = at_h0(c, "cobracket term");
        if (v == 0) continue;
        if (key.first.size() == 1 && key.second.size() == 1) out.add({key.first[0], key.second[0]}, v);
        else if (residual) residual->add(TWord{Word(key.first), Word(key.second)}, v);
    }
    return out;
}

Expr<Rational> specialize(const ClassicalEngine& ce, const PresExpr<QFrac>& x) {
    const Quiver& q = ce.quiver();
    Expr<Rational> out;
    for (const auto& [w, c] : x) {
        if (!c.is_laurent()) throw ValuationError("relation coefficient has a pole at q = 1");
        Expr<Rational> acc = ce.scalar(c.num().eval_q1());
        for (const Generator& g : w) {
            const int id = q.id(g.iv);
            switch (g.kind) {
                case GenKind::Kplus:
                case GenKind::Kminus: break;
                case GenKind::H:
                case GenKind::Xi: acc = ce.mult(acc, ce.xi_of(id)); break;
                case GenKind::Xplus: acc = ce.mult(acc, Expr<Rational>(Word{xp(id)}, Rational(2))); break;
                case GenKind::Xminus: acc = ce.mult(acc, Expr<Rational>(Word{xm(id)}, Rational(2))); break;
            }
        }
        out += acc;
    }
    return ce.normal_form(out);
}

}  // namespace qgroup
