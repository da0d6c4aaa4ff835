#pragma once

#include <cmath>

namespace latcert {

// A real value with a proven absolute error radius: the true quantity lies in
// [mid - rad, mid + rad].  Radii cover both series truncation and a
// summation-rounding slop term (see zeta.hpp for the model).
struct CertifiedValue {
    double mid = 0.0;
    double rad = 0.0;

    double lo() const { return mid - rad; }
    double hi() const { return mid + rad; }
    double width() const { return 2.0 * rad; }

    bool contains(double v) const { return lo() <= v && v <= hi(); }
};

// Closed interval [lo, hi] with outward-rounded arithmetic.  Used for the few
// derived quantities (differences, quotients, threshold formulas) built on
// top of certified series values.  Each operation widens the result by one
// ulp per endpoint, which dominates the single rounding the operation incurs.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval from_certified(const CertifiedValue& c) { return {c.lo(), c.hi()}; }
    static Interval point(double v) { return {v, v}; }

    CertifiedValue to_certified() const {
        const double mid = 0.5 * (lo + hi);
        const double rad = std::fmax(hi - mid, mid - lo);
        // One extra ulp keeps the enclosure valid after the midpoint rounding.
        return {mid, std::nextafter(rad, INFINITY)};
    }

    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    double mag() const { return std::fmax(std::fabs(lo), std::fabs(hi)); }
};

inline double down(double v) { return std::nextafter(v, -INFINITY); }
inline double up(double v) { return std::nextafter(v, INFINITY); }

inline Interval operator+(const Interval& a, const Interval& b) {
    return {down(a.lo + b.lo), up(a.hi + b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return {down(a.lo - b.hi), up(a.hi - b.lo)};
}

inline Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {down(std::fmin(std::fmin(p1, p2), std::fmin(p3, p4))),
            up(std::fmax(std::fmax(p1, p2), std::fmax(p3, p4)))};
}

// Division requiring 0 outside [b.lo, b.hi].
Interval div(const Interval& a, const Interval& b);

// Interval power t^e for t.lo > 0 (monotone in t for fixed e).
Interval pow(const Interval& t, double e);

// Interval square root for t.lo >= 0.
Interval sqrt(const Interval& t);

}  // namespace latcert
