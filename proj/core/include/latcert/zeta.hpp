#pragma once

#include <cstdint>

#include "latcert/certified.hpp"
#include "latcert/lattice.hpp"

namespace latcert {

// Truncation box for lattice sums: indices |m| <= N, |n| <= N, origin omitted.
struct TruncationSpec {
    int N = 40;
};

// Partial Epstein zeta sum
//     zeta^N_L(s) = sum_{0 < max(|m|,|n|) <= N} Q_L(m, n)^{-s/2}.
// Terms are accumulated shell by shell (increasing max(|m|,|n|)) in a fixed
// order, so results are deterministic regardless of how callers parallelize
// across points.  Requires s > 2 (divergent otherwise as N -> infinity).
double epstein_partial(const DomainPoint& p, double s, TruncationSpec t);

// Proven bound on the truncation error zeta_L(s) - zeta^N_L(s):
//
//     B(y, s, N) = (2y)^{s/2} * 8 * N^{2-s} / (s - 2).
//
// Derivation: shell k holds at most 8k index pairs, each with
// (m + xn)^2 + y^2 n^2 >= (m^2 + n^2)/2 >= k^2/2, hence Q >= k^2/(2y), and
// sum_{k>N} 8k (2y/k^2)^{s/2} <= (2y)^{s/2} 8 N^{2-s}/(s-2).
// The middle inequality holds iff y^2 - x^2 >= 1/2, which is true on the
// whole reduced domain and on the sweep rectangle x in [0,1/2], y >= sqrt(3)/2
// (it fails for some lattices below that, e.g. (0.5, 0.8); see
// epstein_tail_bound_general for those).
double epstein_tail_bound(double y, double s, TruncationSpec t);

// Same tail bound with the sandwich constant replaced by the exact least
// eigenvalue of the Gram matrix: (y/lambda_min)^{s/2} * 8 * N^{2-s}/(s-2).
// Valid for every y > 0 and x; coincides with epstein_tail_bound when
// lambda_min = 1/2 and is tighter wherever lambda_min > 1/2.
double epstein_tail_bound_general(const DomainPoint& p, double s, TruncationSpec t);

// Certified evaluation of zeta_L(s): picks the smallest N whose tail bound is
// <= tol/2, then returns mid = partial sum and
//
//     rad = (tail + |mid|*eps*T) * (1 + 1e-12*T),
//
// where T is the number of summed terms: the documented slop model (an
// explicit worst-case summation-rounding term plus the 1e-12*T inflation
// factor).  Throws ToleranceError when tol cannot be certified at double
// precision or within the summation budget; never returns a silently looser
// radius than requested.
CertifiedValue epstein_certified(const DomainPoint& p, double s, double tol);

// Certified Riemann zeta(s) = sum m^{-s} for s > 1, with the classical tail
// bound  zeta(s) - sum_{m<=N} m^{-s} <= s/(s-1) * N^{1-s}.
CertifiedValue riemann_certified(double s, double tol);

// The truncation epstein_certified would pick: the smallest N whose general
// tail bound is <= tol/2.  Exposed so multi-output kernels (value + gradient
// in one pass) can certify with the same radius model.
TruncationSpec select_truncation(const DomainPoint& p, double s, double tol);

// The shared radius model: (tail + |mid|*eps*T) * (1 + 1e-12*T).
double summation_radius(double mid, double tail, std::uint64_t terms);

struct Gradient2 {
    double dx = 0.0;
    double dy = 0.0;
    double norm() const;
};

// Truncated gradient of (x, y) -> zeta_L(s):
//   d/dx = -s y^{s/2}     sum' n(m+xn)          / ((m+xn)^2 + y^2 n^2)^{s/2+1}
//   d/dy = (s/2) y^{s/2-1} sum' ((m+xn)^2-y^2n^2) / ((m+xn)^2 + y^2 n^2)^{s/2+1}
Gradient2 epstein_gradient(const DomainPoint& p, double s, TruncationSpec t);

// Tail bound for each gradient component (same shell-counting derivation as
// epstein_tail_bound, with exponent s/2 + 1 and a factor for the |n|(|m| +
// |n|/2) numerator growth):  (2y)^{s/2+1} * s * 16 * N^{2-s} / (s-2).
// Requires y^2 - x^2 >= 1/2 (as epstein_tail_bound) and additionally
// y >= 3/4, which absorbs the shell coefficients of both components
// (24 <= 32y for d/dx, 16y + 4/y <= 32y for d/dy).  Both hold everywhere
// on the sweep rectangle y >= sqrt(3)/2.
double epstein_gradient_tail_bound(double y, double s, TruncationSpec t);

// Truncated log-weighted lattice sum
//     F_s^N(L) = - sum' (s log|p| + 1) / |p|^s
//              = - sum' ((s/2) log Q + 1) * Q^{-s/2},
// over the unit-covolume lattice of p.  Satisfies, termwise exactly,
// s * d/ds zeta^N_L(s) - zeta^N_L(s) = F_s^N(L).
double log_weighted_sum(const DomainPoint& p, double s, TruncationSpec t);

// Certified zeta of the triangular lattice, cached per exact (s, tol) bits
// (single-writer initialization; safe for concurrent sweeps).
CertifiedValue triangular_zeta_cached(double s, double tol);

// Number of terms in the truncation box (diagnostics/slop bookkeeping).
inline std::uint64_t term_count(TruncationSpec t) {
    const std::uint64_t w = 2ULL * static_cast<std::uint64_t>(t.N) + 1ULL;
    return w * w - 1ULL;
}

}  // namespace latcert
