#include "qgroup/quiver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace qgroup {

Grid::Grid(std::vector<Rational> breakpoints) : pts_(std::move(breakpoints)) {
    if (pts_.size() < 2) throw ConfigError("grid needs at least two breakpoints");
    for (std::size_t i = 1; i < pts_.size(); ++i)
        if (!(pts_[i - 1] < pts_[i])) throw ConfigError("grid breakpoints must be strictly increasing");
}

Grid Grid::uniform(int n) {
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.emplace_back(i);
    return Grid(std::move(v));
}

Grid Grid::parse(const std::string& text) {
    std::vector<Rational> v;
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("grid JSON: ") + e.what());
        }
        for (const auto& x : j) {
            if (x.is_string()) v.push_back(parse_rational(x.get<std::string>()));
            else if (x.is_number_integer()) v.emplace_back(x.get<long>());
            else throw ConfigError("grid entries must be rational strings");
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
    }
    return Grid(std::move(v));
}

std::optional<int> Grid::index_of(const Rational& r) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), r);
    if (it == pts_.end() || *it != r) return std::nullopt;
    return static_cast<int>(it - pts_.begin());
}

std::string Grid::json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : pts_) j.push_back(p.get_str());
    return j.dump();
}

// ------------------------------------------------------------ interval ops

std::optional<Interval> osum(Interval a, Interval b) {
    if (a.hi == b.lo) return Interval{a.lo, b.hi};
    if (b.hi == a.lo) return Interval{b.lo, a.hi};
    return std::nullopt;
}

std::optional<Interval> odiff(Interval a, Interval b) {
    if (a == b || b.lo < a.lo || b.hi > a.hi) return std::nullopt;
    if (b.lo == a.lo) return Interval{b.hi, a.hi};
    if (b.hi == a.hi) return Interval{a.lo, b.lo};
    return std::nullopt;
}

namespace {
bool nested(Interval a, Interval b) {
    return (a.lo <= b.lo && b.hi <= a.hi) || (b.lo <= a.lo && a.hi <= b.hi);
}
bool proper_overlap(Interval a, Interval b) {
    return !nested(a, b) && std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
}
}  // namespace

std::optional<Interval> strict_union(Interval a, Interval b) {
    if (proper_overlap(a, b)) return Interval{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    return osum(a, b);
}

std::optional<Interval> strict_intersection(Interval a, Interval b) {
    if (proper_overlap(a, b)) return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    return std::nullopt;
}

EulerData euler(Interval x, Interval y, EulerVariant v) {
    auto raw = [](Interval s, Interval t) {
        int a = s.lo, b = s.hi, c = t.lo, d = t.hi;
        return int(a < d && d <= b) - int(a < c && c <= b);
    };
    int ns = v == EulerVariant::Default ? raw(x, y) : raw(y, x);
    return {ns, raw(x, y) + raw(y, x)};
}

EulerVariant parse_euler_variant(const std::string& s) {
    if (s == "default") return EulerVariant::Default;
    if (s == "transposed") return EulerVariant::Transposed;
    throw ConfigError("unknown euler variant '" + s + "'");
}

SerreVariant parse_serre_variant(const std::string& s) {
    if (s == "full") return SerreVariant::Full;
    if (s == "conservative") return SerreVariant::Conservative;
    throw ConfigError("unknown serre variant '" + s + "'");
}

IntervalOrder parse_interval_order(const std::string& s) {
    if (s == "lex") return IntervalOrder::Lex;
    if (s == "colex") return IntervalOrder::Colex;
    throw ConfigError("unknown interval order '" + s + "'");
}

std::string name(EulerVariant v) { return v == EulerVariant::Default ? "default" : "transposed"; }
std::string name(SerreVariant v) { return v == SerreVariant::Full ? "full" : "conservative"; }
std::string name(IntervalOrder v) { return v == IntervalOrder::Lex ? "lex" : "colex"; }

bool serre_predicate(Interval a, Interval b, SerreVariant v, EulerVariant ev) {
    if (a == b) return false;
    if (v == SerreVariant::Full) return true;
    if (osum(a, b) || proper_overlap(a, b)) return true;
    bool disjoint = a.hi <= b.lo || b.hi <= a.lo;
    return disjoint && euler(a, b, ev).sym == 0;
}

// ------------------------------------------------------------------ Quiver

Quiver::Quiver(Grid grid, EulerVariant ev, SerreVariant sv, IntervalOrder order)
    : grid_(std::move(grid)), ev_(ev), sv_(sv), order_(order) {
    const int g = grid_.size();
    for (int lo = 0; lo < g; ++lo)
        for (int hi = lo + 1; hi < g; ++hi) ivs_.push_back({lo, hi});
    if (order_ == IntervalOrder::Colex)
        std::sort(ivs_.begin(), ivs_.end(),
                  [](Interval a, Interval b) { return std::pair(a.hi, a.lo) < std::pair(b.hi, b.lo); });
    n_ = static_cast<int>(ivs_.size());
    id_of_.assign(static_cast<std::size_t>(g * g), -1);
    for (int i = 0; i < n_; ++i) id_of_[ivs_[i].lo * g + ivs_[i].hi] = i;

    auto lift = [&](std::optional<Interval> iv) -> std::optional<int> {
        if (!iv) return std::nullopt;
        return id(*iv);
    };
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    sum_.resize(nn);
    diff_.resize(nn);
    union_.resize(nn);
    inter_.resize(nn);
    euler_.resize(nn);
    serre_.resize(nn);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            const std::size_t k = static_cast<std::size_t>(a) * n_ + b;
            sum_[k] = lift(qgroup::osum(ivs_[a], ivs_[b]));
            diff_[k] = lift(qgroup::odiff(ivs_[a], ivs_[b]));
            union_[k] = lift(strict_union(ivs_[a], ivs_[b]));
            inter_[k] = lift(strict_intersection(ivs_[a], ivs_[b]));
            euler_[k] = qgroup::euler(ivs_[a], ivs_[b], ev_);
            serre_[k] = serre_predicate(ivs_[a], ivs_[b], sv_, ev_);
        }

    auto pfun = [&](int a, int b) {
        const auto& e = euler_[static_cast<std::size_t>(a) * n_ + b];
        return (e.nonsym % 2 == 0 ? 1 : -1) * e.sym;
    };
    coeffs_.resize(nn);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            const std::size_t k = static_cast<std::size_t>(a) * n_ + b;
            CoeffRow& row = coeffs_[k];
            row.p = pfun(a, b);
            if (auto d = diff_[k]) row.cplus = Rational(pfun(b, *d) - 1, 2);
            if (auto d = diff_[static_cast<std::size_t>(b) * n_ + a]) row.cminus = Rational(pfun(*d, a) + 1, 2);
            if (auto u = union_[k]) row.b = pfun(a, *u);
            const auto& e = euler_[k];
            row.r = a == b ? 0 : (e.nonsym % 2 == 0 ? 1 : -1) * e.sym * e.sym;
            if (auto s = sum_[k]) {
                row.splus = Rational(pfun(b, *s) + 1, 2);
                row.sminus = Rational(pfun(b, *s) - 1, 2);
            }
            if (row.cplus) row.cplus->canonicalize();
            if (row.cminus) row.cminus->canonicalize();
            if (row.splus) row.splus->canonicalize();
            if (row.sminus) row.sminus->canonicalize();
        }

    decomp_.resize(n_);
    for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
            if (auto s = sum_[static_cast<std::size_t>(b) * n_ + c]) decomp_[*s].emplace_back(b, c);
}

int Quiver::id(Interval iv) const {
    auto f = find(iv);
    if (!f) throw ConfigError("interval is not on the grid");
    return *f;
}

std::optional<int> Quiver::find(Interval iv) const {
    const int g = grid_.size();
    if (iv.lo < 0 || iv.hi >= g || iv.lo >= iv.hi) return std::nullopt;
    int v = id_of_[iv.lo * g + iv.hi];
    if (v < 0) return std::nullopt;
    return v;
}

std::string Quiver::text(Interval iv) const {
    return "[" + grid_.at(iv.lo).get_str() + "," + grid_.at(iv.hi).get_str() + ")";
}

std::string Quiver::text(int id) const { return text(ivs_[id]); }

std::vector<std::pair<Interval, Interval>> Quiver::serre_pairs() const {
    std::vector<std::pair<Interval, Interval>> out;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (in_serre(a, b)) out.emplace_back(ivs_[a], ivs_[b]);
    return out;
}

}  // namespace qgroup
