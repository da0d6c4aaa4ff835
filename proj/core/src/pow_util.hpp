#pragma once

#include <cmath>

namespace latcert::detail {

// q^e for integer e >= 0 by binary exponentiation.
inline double ipow(double q, int e) {
    double r = 1.0, b = q;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Evaluator for q^{-s/2}.  Lattice-sum kernels spend nearly all their time
// here, so the common case of an integral half-exponent (every tabulated
// exponent pair) routes to multiplications instead of std::pow.
struct HalfPow {
    double half_s = 3.0;
    int int_e = 0;  // > 0 when half_s is that integer

    explicit HalfPow(double s) : half_s(0.5 * s) {
        const double r = std::nearbyint(half_s);
        if (r >= 1.0 && r <= 64.0 && std::fabs(half_s - r) < 1e-12) {
            int_e = static_cast<int>(r);
        }
    }

    // qinv must equal 1/q.
    double operator()(double q, double qinv) const {
        if (int_e) return ipow(qinv, int_e);
        return std::pow(q, -half_s);
    }
};

}  // namespace latcert::detail
