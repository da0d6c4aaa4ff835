#include "latcert/certified.hpp"

#include "latcert/errors.hpp"

namespace latcert {

Interval div(const Interval& a, const Interval& b) {
    if (b.contains_zero()) {
        throw ConfigError("interval division by an interval containing zero");
    }
    const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
    return {down(std::fmin(std::fmin(q1, q2), std::fmin(q3, q4))),
            up(std::fmax(std::fmax(q1, q2), std::fmax(q3, q4)))};
}

Interval pow(const Interval& t, double e) {
    if (t.lo <= 0.0) {
        throw ConfigError("interval pow requires a strictly positive base");
    }
    // t^e is monotone in t for fixed e; widen each endpoint by two ulps to
    // cover the worst-case error of std::pow (typically < 2 ulp).
    const double a = std::pow(t.lo, e);
    const double b = std::pow(t.hi, e);
    const double lo = std::fmin(a, b);
    const double hi = std::fmax(a, b);
    return {down(down(lo)), up(up(hi))};
}

Interval sqrt(const Interval& t) {
    if (t.lo < 0.0) {
        throw ConfigError("interval sqrt requires a nonnegative lower endpoint");
    }
    // std::sqrt is correctly rounded, so one outward ulp per endpoint suffices.
    return {down(std::sqrt(t.lo)), up(std::sqrt(t.hi))};
}

}  // namespace latcert
