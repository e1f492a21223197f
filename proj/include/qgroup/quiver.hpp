// Finite model of a line-type continuum quiver: grid-aligned half-open
// intervals, their partial operations, the Euler form and the relation
// coefficients built from it.
#pragma once

#include "qgroup/coeffring.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qgroup {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Grid {
public:
    explicit Grid(std::vector<Rational> breakpoints);
    static Grid uniform(int n);  // {0, 1, ..., n-1}
    static Grid parse(const std::string& text);  // "0,1/2,1" or JSON array

    int size() const { return static_cast<int>(pts_.size()); }
    const Rational& at(int i) const { return pts_[i]; }
    std::optional<int> index_of(const Rational& r) const;
    std::string json() const;
    bool operator==(const Grid& o) const { return pts_ == o.pts_; }

private:
    std::vector<Rational> pts_;
};

// [lo, hi) with endpoints stored as breakpoint indices.
struct Interval {
    int lo = 0;
    int hi = 0;
    int length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
    auto operator<=>(const Interval&) const = default;
};

std::optional<Interval> osum(Interval a, Interval b);
std::optional<Interval> odiff(Interval a, Interval b);
std::optional<Interval> strict_union(Interval a, Interval b);
std::optional<Interval> strict_intersection(Interval a, Interval b);

struct EulerData {
    int nonsym = 0;
    int sym = 0;
    bool operator==(const EulerData&) const = default;
};

enum class EulerVariant { Default, Transposed };
enum class SerreVariant { Full, Conservative };
enum class IntervalOrder { Lex, Colex };

EulerVariant parse_euler_variant(const std::string& s);
SerreVariant parse_serre_variant(const std::string& s);
IntervalOrder parse_interval_order(const std::string& s);
std::string name(EulerVariant v);
std::string name(SerreVariant v);
std::string name(IntervalOrder v);

EulerData euler(Interval a, Interval b, EulerVariant v = EulerVariant::Default);

struct CoeffRow {
    int p = 0;
    std::optional<Rational> cplus, cminus, splus, sminus;
    std::optional<int> b;
    int r = 0;
};

// Everything the algebra layers need about one grid, precomputed.
// Interval ids run over all n(n-1)/2 intervals sorted by the chosen order;
// cell ids are the breakpoint index of the cell's left end.
class Quiver {
public:
    Quiver(Grid grid, EulerVariant ev = EulerVariant::Default, SerreVariant sv = SerreVariant::Full,
           IntervalOrder order = IntervalOrder::Lex);

    const Grid& grid() const { return grid_; }
    EulerVariant euler_variant() const { return ev_; }
    SerreVariant serre_variant() const { return sv_; }
    IntervalOrder order() const { return order_; }

    int num_intervals() const { return static_cast<int>(ivs_.size()); }
    int num_cells() const { return grid_.size() - 1; }
    const Interval& interval(int id) const { return ivs_[id]; }
    int id(Interval iv) const;
    int cell_interval(int cell) const { return id(Interval{cell, cell + 1}); }
    std::optional<int> find(Interval iv) const;
    const std::vector<Interval>& intervals() const { return ivs_; }

    std::string text(int id) const;
    std::string text(Interval iv) const;

    std::optional<int> osum(int a, int b) const { return sum_[a * n_ + b]; }
    std::optional<int> odiff(int a, int b) const { return diff_[a * n_ + b]; }
    std::optional<int> sunion(int a, int b) const { return union_[a * n_ + b]; }
    std::optional<int> sinter(int a, int b) const { return inter_[a * n_ + b]; }
    const EulerData& euler(int a, int b) const { return euler_[a * n_ + b]; }
    int sym(int a, int b) const { return euler_[a * n_ + b].sym; }
    // (cell | interval)
    int cell_sym(int cell, int b) const { return sym(cell_interval(cell), b); }
    const CoeffRow& coeffs(int a, int b) const { return coeffs_[a * n_ + b]; }
    int p(int a, int b) const { return coeffs_[a * n_ + b].p; }
    bool in_serre(int a, int b) const { return serre_[a * n_ + b]; }
    // ordered pairs (b, c) with b (+) c = a
    const std::vector<std::pair<int, int>>& decompositions(int a) const { return decomp_[a]; }

    std::vector<std::pair<Interval, Interval>> serre_pairs() const;

private:
    Grid grid_;
    EulerVariant ev_;
    SerreVariant sv_;
    IntervalOrder order_;
    int n_ = 0;
    std::vector<Interval> ivs_;
    std::vector<int> id_of_;  // lo * grid + hi -> id
    std::vector<std::optional<int>> sum_, diff_, union_, inter_;
    std::vector<EulerData> euler_;
    std::vector<CoeffRow> coeffs_;
    std::vector<char> serre_;
    std::vector<std::vector<std::pair<int, int>>> decomp_;
};

bool serre_predicate(Interval a, Interval b, SerreVariant v, EulerVariant ev);

using QuiverPtr = std::shared_ptr<const Quiver>;

}  // namespace qgroup
