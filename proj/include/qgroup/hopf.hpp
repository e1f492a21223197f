// Coproduct, counit and antipode extended from the generator tables, plus the
// Hopf pairing between the formal Borel subalgebras.
#pragma once

#include "qgroup/ncalg.hpp"

#include <functional>
#include <set>

namespace qgroup {

template <class S>
class Hopf {
public:
    explicit Hopf(const Engine<S>& e) : e_(e) {}
    const Engine<S>& engine() const { return e_; }

    TExpr<S> coproduct(const Word& w) const;
    TExpr<S> coproduct(const Expr<S>& x) const;
    // Delta^(n): arity n+1, iterating on the leftmost slot
    TExpr<S> iterated_coproduct(const Expr<S>& x, int n) const;
    // apply Delta to one slot of a tensor
    TExpr<S> coproduct_slot(const TExpr<S>& t, std::size_t slot) const;
    S counit(const Word& w) const;
    S counit(const Expr<S>& x) const;

    Expr<S> antipode(const Letter& l) const;
    Expr<S> antipode(const Word& w) const;
    Expr<S> antipode(const Expr<S>& x) const;
    // sum_k (-1)^k m^(k-1) (id - iota eps)^(x)k Delta^(k-1), k <= max_terms
    Expr<S> antipode_series(const Expr<S>& x, int max_terms) const;

    // slotwise maps and products
    TExpr<S> map_slot(const TExpr<S>& t, std::size_t slot, const std::function<Expr<S>(const Word&)>& f) const;
    TExpr<S> flip(const TExpr<S>& t) const;
    Expr<S> multiply_out(const TExpr<S>& t) const;
    Expr<S> id_minus_counit(const Word& w) const;
    TExpr<S> counit_slot(const TExpr<S>& t, std::size_t slot) const;  // drops the slot

private:
    const Engine<S>& e_;
    mutable std::mutex mu_;
    mutable std::map<Word, TExpr<S>> dcache_;
    mutable std::map<Letter, Expr<S>> scache_;
    mutable std::map<Word, Expr<S>> wcache_;
    mutable std::set<Letter> in_progress_;
};

extern template class Hopf<QFrac>;
extern template class Hopf<SeriesH>;
extern template class Hopf<Rational>;

// Which tensor slot pairs with which when a product is split:
//   CopOnMinus (ab|y) = (a|y2)(b|y1), (a|yz) = (a1|y)(a2|z)
//   Plain      (ab|y) = (a|y1)(b|y2), (a|yz) = (a1|y)(a2|z)
//   OpOnMinus  (ab|y) = (a|y1)(b|y2), (a|yz) = (a2|y)(a1|z), the preferred one
enum class PairingConvention { CopOnMinus, Plain, OpOnMinus };
const std::vector<PairingConvention>& pairing_conventions();
std::string name(PairingConvention c);

// Pairing U_h(b+) x U_h(b-) -> Laurent series in h, from
// (Xi_a|Xi_b) = (a|b)/h and (X+_a|X-_b) = delta_ab/(q - q^-1).
class Pairing {
public:
    // `order` is the requested truncation; the internal engine runs with
    // extra headroom because each generator pairing divides by h.
    // `xi_scale` multiplies (Xi_a|Xi_b); 1 gives the generator values above.
    Pairing(QuiverPtr q, int order, PairingConvention conv, int headroom = 6, int xi_scale = 1);

    const FormalEngine& engine() const { return eng_; }
    PairingConvention convention() const { return conv_; }
    int order() const { return order_; }

    SeriesH pair(const Expr<SeriesH>& u, const Expr<SeriesH>& v) const;
    SeriesH pair_words(const Word& u, const Word& v) const;
    // the same, with an unnormalized left argument (used for radical checks)
    SeriesH pair_raw(const Expr<SeriesH>& u, const Expr<SeriesH>& v) const;

private:
    SeriesH gen_pair(Letter a, Letter b) const;
    int order_;
    PairingConvention conv_;
    int xi_scale_;
    FormalEngine eng_;
    Hopf<SeriesH> hopf_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<Word, Word>, SeriesH> memo_;
};

}  // namespace qgroup
