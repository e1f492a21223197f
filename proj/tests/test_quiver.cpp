#include "qgroup/quiver.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace qgroup;

namespace {

using Cells = std::set<int>;

Cells cells(Interval a) {
    Cells s;
    for (int i = a.lo; i < a.hi; ++i) s.insert(i);
    return s;
}

std::optional<Interval> interval_of(const Cells& s) {
    if (s.empty()) return std::nullopt;
    const int lo = *s.begin(), hi = *s.rbegin() + 1;
    if (static_cast<int>(s.size()) != hi - lo) return std::nullopt;
    return Interval{lo, hi};
}

bool subset(const Cells& a, const Cells& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Cells meet(const Cells& a, const Cells& b) {
    Cells r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

Cells join(const Cells& a, const Cells& b) {
    Cells r = a;
    r.insert(b.begin(), b.end());
    return r;
}

Cells minus(const Cells& a, const Cells& b) {
    Cells r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

int ind(bool b) { return b ? 1 : 0; }

// <[a,b),[c,d)> = 1(a < d <= b) - 1(a < c <= b)
int nonsym(Interval x, Interval y) {
    return ind(x.lo < y.hi && y.hi <= x.hi) - ind(x.lo < y.lo && y.lo <= x.hi);
}

}  // namespace

TEST_CASE("spec examples of the partial operations") {
    const Interval a{0, 1}, b{1, 2}, c{0, 2}, d{1, 3}, e{2, 3}, f{0, 3};
    CHECK(osum(a, b) == c);
    CHECK_FALSE(osum(a, e));
    CHECK_FALSE(osum(c, d));
    CHECK(odiff(c, b) == a);
    CHECK(odiff(c, a) == b);
    CHECK_FALSE(odiff(f, b));
    CHECK(strict_union(c, d) == f);
    CHECK(strict_intersection(c, d) == b);
    CHECK(strict_union(a, b) == c);
    CHECK_FALSE(strict_intersection(a, b));
    CHECK_FALSE(strict_union(f, b));
}

TEST_CASE("partial operations match set computations on grids up to 5 points") {
    for (int n = 2; n <= 5; ++n) {
        const Quiver q(Grid::uniform(n));
        CHECK(q.num_intervals() == n * (n - 1) / 2);
        for (const Interval& x : q.intervals())
            for (const Interval& y : q.intervals()) {
                const Cells X = cells(x), Y = cells(y), I = meet(X, Y);
                const bool nested = subset(X, Y) || subset(Y, X);
                const bool overlap = !I.empty() && !nested;
                CAPTURE(q.text(x));
                CAPTURE(q.text(y));
                CHECK(osum(x, y) == (I.empty() ? interval_of(join(X, Y)) : std::nullopt));
                const std::optional<Interval> diff =
                    (subset(Y, X) && X != Y) ? interval_of(minus(X, Y)) : std::optional<Interval>{};
                CHECK(odiff(x, y) == diff);
                CHECK(strict_union(x, y) == ((X != Y && !nested) ? interval_of(join(X, Y)) : std::nullopt));
                CHECK(strict_intersection(x, y) == (overlap ? interval_of(I) : std::nullopt));
            }
    }
}

TEST_CASE("euler form and coefficients") {
    const Quiver q(Grid::uniform(5));
    for (int a = 0; a < q.num_intervals(); ++a)
        for (int b = 0; b < q.num_intervals(); ++b) {
            const Interval x = q.interval(a), y = q.interval(b);
            CHECK(q.euler(a, b).nonsym == nonsym(x, y));
            CHECK(q.sym(a, b) == nonsym(x, y) + nonsym(y, x));
            CHECK(q.sym(a, b) == q.sym(b, a));
            const int sign = (nonsym(x, y) % 2 == 0) ? 1 : -1;
            CHECK(q.p(a, b) == sign * q.sym(a, b));
            if (auto s = q.osum(a, b)) {
                REQUIRE(q.coeffs(a, b).b.has_value());
                CHECK(*q.coeffs(a, b).b == q.p(a, *s));
            }
        }
    for (int a = 0; a < q.num_intervals(); ++a) CHECK(q.sym(a, a) == 2);
}

TEST_CASE("spec examples of p and b") {
    const Quiver q(Grid::uniform(3));
    const int a = q.id({0, 1}), b = q.id({1, 2}), c = q.id({0, 2});
    CHECK(q.p(a, c) == 1);
    CHECK(q.coeffs(a, b).b == 1);
}

TEST_CASE("serre pairs") {
    const Quiver full(Grid::uniform(5));
    const Quiver cons(Grid::uniform(5), EulerVariant::Default, SerreVariant::Conservative);
    std::set<std::pair<Interval, Interval>> want_full, want_cons;
    for (int a = 0; a < cons.num_intervals(); ++a)
        for (int b = 0; b < cons.num_intervals(); ++b) {
            const Interval x = cons.interval(a), y = cons.interval(b);
            if (x == y) continue;
            want_full.insert({x, y});
            const Cells X = cells(x), Y = cells(y), I = meet(X, Y);
            if (subset(X, Y) || subset(Y, X)) continue;
            const bool sum = osum(x, y).has_value();
            const bool overlap = !I.empty();
            const bool far = I.empty() && !sum && cons.sym(a, b) == 0;
            if (sum || overlap || far) want_cons.insert({x, y});
        }
    const auto got_full = full.serre_pairs();
    const auto got_cons = cons.serre_pairs();
    CHECK(std::set<std::pair<Interval, Interval>>(got_full.begin(), got_full.end()) == want_full);
    CHECK(std::set<std::pair<Interval, Interval>>(got_cons.begin(), got_cons.end()) == want_cons);
    CHECK(want_cons.count({Interval{0, 1}, Interval{1, 2}}) == 1);
    CHECK(want_cons.count({Interval{0, 3}, Interval{1, 2}}) == 0);
}

TEST_CASE("decompositions list every ordered split") {
    const Quiver q(Grid::uniform(5));
    for (int a = 0; a < q.num_intervals(); ++a) {
        const Interval x = q.interval(a);
        CHECK(static_cast<int>(q.decompositions(a).size()) == 2 * (x.length() - 1));
        for (const auto& [b, c] : q.decompositions(a)) CHECK(q.osum(b, c) == a);
    }
}

TEST_CASE("grid parsing") {
    const Grid g = Grid::parse("0,1/2,1");
    CHECK(g.size() == 3);
    CHECK(g.at(1) == Rational(1, 2));
    CHECK(Grid::parse("[0, \"1/2\", 1]") == g);
    CHECK_THROWS_AS(Grid::parse("[0, 0.5, 1]"), ConfigError);
    CHECK_THROWS_AS(Grid::parse("0,1,1"), ConfigError);
    CHECK_THROWS(Grid::parse("0"));
}
