// Drinfeld's functor delta_n, membership in U', and the checks around the
// integral forms Utilde.
#pragma once

#include "qgroup/classical.hpp"

#include <nlohmann/json.hpp>

namespace qgroup {

// delta_n = (id - iota eps)^(x)n Delta^(n-1), computed as
// delta_n = (id^(x)(n-2) (x) delta_2) delta_(n-1).
template <class S>
TExpr<S> delta_n(const Hopf<S>& h, const Expr<S>& x, int n);

struct Verdict {
    int n = 0;
    bool divisible = false;
    int valuation = 0;        // smallest (q-1)- or h-valuation among the coefficients
    std::string witness;      // basis tensor with the offending coefficient
};

struct MembershipReport {
    std::string element;
    std::string side;  // "q-adic" or "h-adic"
    int depth = 0;
    std::vector<Verdict> verdicts;  // stops at the first failing n
    bool pass = false;
    nlohmann::json json() const;
};

// q-adic: delta_n(x) in (q-1)^n Uq^(x)n, coefficients read in the Uq basis.
MembershipReport membership(const Hopf<QFrac>& h, const Expr<QFrac>& x, int depth, const std::string& text);
// h-adic: delta_n(x) in h^n Uh^(x)n; the engine order must exceed the depth.
MembershipReport membership(const Hopf<SeriesH>& h, const Expr<SeriesH>& x, int depth, const std::string& text);

struct KInverseCertificate {
    bool identity = false;  // K^-1 = sum_(n<N) (-1)^n Hbar^n + (-1)^N Hbar^N K^-1
    MembershipReport report;
    bool pass() const { return identity && report.pass; }
};
KInverseCertificate kinverse_certificate(const Hopf<QFrac>& h, Interval a, int N);

struct CommutativityReport {
    Presentation presentation;
    long pairs = 0;
    int worst_valuation = 0;                    // INT_MAX when every commutator vanishes
    std::vector<std::string> failures;          // pairs whose commutator is not divisible
    std::vector<std::string> qmqi_failures;     // X+_a, X-_a commutators not divisible by q - q^-1
    bool pass() const { return failures.empty() && qmqi_failures.empty(); }
};
CommutativityReport commutativity_check(const PolyEngine& pe);
CommutativityReport commutativity_check(const FormalEngine& fe);

struct DualShapeReport {
    int degree = 0;
    long monomials = 0;        // enumerated commutative monomials
    long free_count = 0;       // closed-form count
    long distinct = 0;         // distinct q = 1 images
    std::vector<std::string> failures;
    bool plus_closed = false, cartan_closed = false, minus_closed = false;
    bool pass() const {
        return failures.empty() && monomials == free_count && distinct == free_count && plus_closed && cartan_closed &&
               minus_closed;
    }
};
// Number of (a, m) with a in N^nx, m in Z^nk and |a| + |m|_1 <= D.
long free_commutative_count(int nx, int nk, int D);
DualShapeReport dual_shape_check(const Hopf<QFrac>& h, int D);

}  // namespace qgroup
