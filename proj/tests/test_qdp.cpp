#include "qgroup/parse.hpp"
#include "qgroup/qdp.hpp"

#include <doctest.h>

using namespace qgroup;

namespace {

QuiverPtr grid(int n) { return std::make_shared<Quiver>(Grid::uniform(n)); }

// number of (a, m) in N^nx x Z^nk with |a| + |m|_1 <= D, by enumeration
long brute_count(int nx, int nk, int D) {
    if (nx == 0 && nk == 0) return 1;
    long total = 0;
    if (nx > 0) {
        for (int a = 0; a <= D; ++a) total += brute_count(nx - 1, nk, D - a);
    } else {
        for (int m = -D; m <= D; ++m) total += brute_count(0, nk - 1, D - (m < 0 ? -m : m));
    }
    return total;
}

QFrac qm1() { return QFrac(LaurentQ::q_pow(1) - LaurentQ(1)); }

}  // namespace

TEST_CASE("delta_n on grouplikes and primitives") {
    const auto q = grid(3);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const auto K = embed(pe, Presentation::Uq, {GenKind::Kplus, {0, 1}});
    const auto Km1 = K - pe.scalar(pe.one());
    CHECK(pe.same(delta_n(hp, K, 2), pe.tensor({Km1, Km1})));
    CHECK(pe.same(delta_n(hp, K, 3), pe.tensor({Km1, Km1, Km1})));

    const FormalEngine fe(q, {10000, false, 6, true});
    const Hopf<SeriesH> hf(fe);
    const auto Xi = embed(fe, Presentation::UhTrunc, {GenKind::Xi, {0, 2}});
    TExpr<SeriesH> one_slot;
    for (const auto& [w, c] : Xi) one_slot.add(TWord{w}, c);
    CHECK(fe.same(delta_n(hf, Xi, 1), one_slot));
    CHECK(delta_n(hf, Xi, 2).empty());
}

TEST_CASE("membership controls on the polynomial side") {
    const auto q = grid(3);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const Interval a{0, 1};
    const auto H = embed(pe, Presentation::Uq, {GenKind::H, a});
    const auto r = membership(hp, H, 2, "H[0,1)");
    CHECK_FALSE(r.pass);
    REQUIRE(r.verdicts.size() == 1);
    CHECK(r.verdicts[0].n == 1);
    CHECK(r.verdicts[0].valuation == 0);
    CHECK_FALSE(r.verdicts[0].witness.empty());
    CHECK(membership(hp, H.scaled(qm1()), 4, "").pass);
    CHECK(membership(hp, embed(pe, Presentation::Uq, {GenKind::Kminus, a}), 3, "").pass);
    CHECK(membership(hp, embed(pe, Presentation::Uq, {GenKind::Kplus, a}), 3, "").pass);
    CHECK_FALSE(membership(hp, embed(pe, Presentation::Uq, {GenKind::Xplus, {0, 2}}), 3, "").pass);
}

TEST_CASE("membership is multiplicative on samples") {
    const auto q = grid(3);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const auto x = embed(pe, Presentation::Uq, {GenKind::H, {0, 1}}).scaled(qm1());
    const auto y = embed(pe, Presentation::Uq, {GenKind::Xplus, {0, 2}}).scaled(qm1());
    REQUIRE(membership(hp, x, 3, "").pass);
    REQUIRE(membership(hp, y, 3, "").pass);
    CHECK(membership(hp, pe.mult(x, y), 3, "").pass);
}

TEST_CASE("UqTilde words of length <= 2 lie in Uq'") {
    const auto q = grid(2);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const auto gens = generators(*q, Presentation::UqTilde);
    for (const Generator& g : gens)
        for (const Generator& k : gens) {
            const auto x = pe.mult(embed(pe, Presentation::UqTilde, g), embed(pe, Presentation::UqTilde, k));
            CAPTURE(generator_text(*q, Presentation::UqTilde, g));
            CAPTURE(generator_text(*q, Presentation::UqTilde, k));
            CHECK(membership(hp, x, 3, "").pass);
        }
}

TEST_CASE("membership controls on the formal side") {
    const auto q = grid(3);
    const FormalEngine fe(q, {10000, false, 8, true});
    const Hopf<SeriesH> hf(fe);
    const auto Xi = embed(fe, Presentation::UhTrunc, {GenKind::Xi, {0, 1}});
    const auto r = membership(hf, Xi, 4, "Xi[0,1)");
    CHECK_FALSE(r.pass);
    CHECK(r.verdicts.size() == 1);
    CHECK(membership(hf, Xi.scaled(fe.h_pow(1)), 4, "").pass);
    const auto X = embed(fe, Presentation::UhTrunc, {GenKind::Xplus, {0, 2}});
    CHECK_FALSE(membership(hf, X, 4, "").pass);
    CHECK(membership(hf, X.scaled(fe.qmqi()), 4, "").pass);

    const FormalEngine shallow(q, {10000, false, 4, true});
    const Hopf<SeriesH> hs(shallow);
    CHECK_THROWS_AS(membership(hs, embed(shallow, Presentation::UhTrunc, {GenKind::Xi, {0, 1}}), 4, ""),
                    std::invalid_argument);
}

TEST_CASE("membership report json") {
    const auto q = grid(2);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const auto j = membership(hp, embed(pe, Presentation::Uq, {GenKind::H, {0, 1}}), 2, "H[0,1)").json();
    CHECK(j["element"] == "H[0,1)");
    CHECK(j["pass"] == false);
    CHECK(j["depth"] == 2);
    CHECK(j["verdicts"].size() == 1);
    CHECK(j["verdicts"][0]["n"] == 1);
    CHECK(j["verdicts"][0].contains("witness"));
}

TEST_CASE("K^-1 telescoping certificate") {
    const auto q = grid(3);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    for (int N = 1; N <= 4; ++N) CHECK(kinverse_certificate(hp, {0, 2}, N).pass());
}

TEST_CASE("free commutative count") {
    for (int nx = 0; nx <= 4; ++nx)
        for (int nk = 0; nk <= 3; ++nk)
            for (int D = 0; D <= 4; ++D) CHECK(free_commutative_count(nx, nk, D) == brute_count(nx, nk, D));
}

TEST_CASE("dual shape on two points") {
    const auto q = grid(2);
    const PolyEngine pe(q);
    const Hopf<QFrac> hp(pe);
    const auto r = dual_shape_check(hp, 2);
    CHECK(r.free_count == brute_count(2, 1, 2));
    CHECK(r.monomials == r.free_count);
    CHECK(r.distinct == r.free_count);
    CHECK(r.pass());
}

TEST_CASE("commutativity of Utilde modulo (q-1) and h") {
    const auto q = grid(2);
    const PolyEngine pe(q);
    const auto r = commutativity_check(pe);
    CHECK(r.pass());
    CHECK(r.pairs > 0);
    const FormalEngine fe(q, {10000, false, 6, true});
    CHECK(commutativity_check(fe).pass());
}
