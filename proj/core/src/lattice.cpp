#include "latcert/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "latcert/errors.hpp"

namespace latcert {

double quadratic_form(const DomainPoint& p, long long m, long long n) {
    if (!(p.y > 0.0)) throw ConfigError("quadratic_form: requires y > 0");
    const double w = static_cast<double>(m) + p.x * static_cast<double>(n);
    const double nd = static_cast<double>(n);
    return w * w / p.y + p.y * nd * nd;
}

Basis basis_from_domain_point(const DomainPoint& p) {
    if (!(p.y > 0.0)) throw ConfigError("basis_from_domain_point: requires y > 0");
    const double sy = std::sqrt(p.y);
    return {{1.0 / sy, 0.0}, {p.x / sy, sy}};
}

bool in_domain(double x, double y) {
    return y > 0.0 && x >= 0.0 && x <= 0.5 && x * x + y * y >= 1.0;
}

double gram_least_eigenvalue(double x, double y) {
    // Gram matrix of T(m,n) = (m + xn)^2 + y^2 n^2 is [[1, x], [x, x^2+y^2]];
    // trace t = 1 + x^2 + y^2, determinant y^2.  The stable small-root form
    // 2*det/(t + sqrt(t^2 - 4 det)) avoids cancellation.
    const double t = 1.0 + x * x + y * y;
    const double det = y * y;
    const double disc = std::fmax(t * t - 4.0 * det, 0.0);
    return 2.0 * det / (t + std::sqrt(disc));
}

namespace {

struct V2 {
    double x, y;
    double norm2() const { return x * x + y * y; }
};

V2 sub(V2 a, V2 b, double k) { return {a.x - k * b.x, a.y - k * b.y}; }

}  // namespace

ReducedLattice reduce_to_domain(const Basis& b) {
    const double det = b.det();
    const double norm_scale = std::sqrt(b.u.x * b.u.x + b.u.y * b.u.y) *
                              std::sqrt(b.v.x * b.v.x + b.v.y * b.v.y);
    if (!(std::fabs(det) > 1e-12 * std::fmax(norm_scale, 1e-300))) {
        throw ConfigError("reduce_to_domain: degenerate basis (zero determinant)");
    }

    // Gauss-Lagrange reduction.  The working pair stays an exact integer
    // unimodular image of the input basis: after choosing the integer shift k
    // from double-precision norms, vectors are recomputed from the original
    // basis and the integer coefficient matrix, so rounding never accumulates.
    std::int64_t cu[2] = {1, 0};  // u = cu[0]*b.u + cu[1]*b.v
    std::int64_t cv[2] = {0, 1};

    auto vec = [&](const std::int64_t c[2]) -> V2 {
        return {static_cast<double>(c[0]) * b.u.x + static_cast<double>(c[1]) * b.v.x,
                static_cast<double>(c[0]) * b.u.y + static_cast<double>(c[1]) * b.v.y};
    };

    const double rel = 1e-12;
    V2 u = vec(cu), v = vec(cv);
    if (u.norm2() > v.norm2()) {
        std::swap(cu[0], cv[0]);
        std::swap(cu[1], cv[1]);
        std::swap(u, v);
    }
    for (int iter = 0; iter < 64; ++iter) {
        // Shift v by the integer multiple of u that minimizes |v - k u|.
        const double mu = (v.x * u.x + v.y * u.y) / u.norm2();
        const double kd = std::nearbyint(mu);
        if (std::fabs(kd) > 9.0e18) throw ConfigError("reduce_to_domain: basis too skewed");
        const std::int64_t k = static_cast<std::int64_t>(kd);
        if (k != 0) {
            cv[0] -= k * cu[0];
            cv[1] -= k * cu[1];
            v = vec(cv);
        }
        if (v.norm2() >= u.norm2() * (1.0 - rel)) break;  // reduced: |v| >= |u|
        std::swap(cu[0], cv[0]);
        std::swap(cu[1], cv[1]);
        std::swap(u, v);
    }

    const double covolume = std::fabs(det);  // unimodular transforms preserve it

    // Shape parameters: scale to unit covolume, then x = |<v, u>| / |u|^2 and
    // y = covolume / |u|^2 (the component of v orthogonal to u), which lands
    // in 0 <= x <= 1/2 after the reduction and sign canonicalization.
    const double u2 = u.norm2();
    double x = (v.x * u.x + v.y * u.y) / u2;
    double y = covolume / u2;
    x = std::fabs(x);  // reflection v -> -v; canonical x >= 0
    // |v - k u| minimal puts x in [0, 1/2] up to roundoff; clamp ties.
    if (x > 0.5) x = 1.0 - x;  // safety net for boundary roundoff
    x = std::clamp(x, 0.0, 0.5);

    DomainPoint p{x, y, true};
    // On the unit-circle boundary roundoff may leave x^2+y^2 marginally below
    // 1; that is still the canonical representative.
    return {p, covolume};
}

}  // namespace latcert
