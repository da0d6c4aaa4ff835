#include "latcert/grid.hpp"

#include <cmath>

#include "latcert/errors.hpp"
#include "latcert/lattice.hpp"

namespace latcert {

double DecimalStep::value() const {
    double p = 1.0;
    for (int i = 0; i < d; ++i) p *= 10.0;
    return static_cast<double>(q) / p;
}

DecimalStep DecimalStep::parse(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw ConfigError("grid step must lie in (0, 1)");
    }
    std::int64_t pow10 = 1;
    for (int d = 1; d <= 9; ++d) {
        pow10 *= 10;
        const double scaled = delta * static_cast<double>(pow10);
        const double rounded = std::nearbyint(scaled);
        if (rounded >= 1.0 && std::fabs(scaled - rounded) <= 1e-9 * rounded) {
            DecimalStep s{static_cast<std::int64_t>(rounded), d};
            // Normalize trailing zeros: 0.010 parses as q=1, d=2.
            while (s.d > 1 && s.q % 10 == 0) {
                s.q /= 10;
                --s.d;
            }
            return s;
        }
    }
    throw ConfigError("grid step must be a decimal fraction q * 10^-d with at most 9 decimals");
}

GridSpec build_grid_to(double y_top, double delta) {
    if (!(y_top > kTriangularY)) {
        throw ConfigError("grid top must exceed sqrt(3)/2");
    }
    GridSpec g;
    g.step = DecimalStep::parse(delta);
    g.delta = g.step.value();

    // The x range [0, 1/2] must be an exact whole number of steps:
    // i_max * q = 5 * 10^(d-1).
    std::int64_t half = 5;
    for (int i = 1; i < g.step.d; ++i) half *= 10;
    if (half % g.step.q != 0) {
        throw ConfigError("grid step must divide 1/2 exactly");
    }
    const std::int64_t i_max = half / g.step.q;

    double pow10 = 1.0;
    for (int i = 0; i < g.step.d; ++i) pow10 *= 10.0;

    g.xs.reserve(static_cast<std::size_t>(i_max) + 1);
    for (std::int64_t i = 0; i <= i_max; ++i) {
        g.xs.push_back(static_cast<double>(i * g.step.q) / pow10);
    }

    // First grid-aligned multiple of delta at or above sqrt(3)/2.
    std::int64_t j1 = static_cast<std::int64_t>(
        std::ceil(kTriangularY * pow10 / static_cast<double>(g.step.q)));
    while (static_cast<double>(j1 * g.step.q) / pow10 < kTriangularY) ++j1;
    g.y1 = static_cast<double>(j1 * g.step.q) / pow10;

    // Covering requirement: every point of the band sqrt(3)/2 <= y < y1 must
    // be within delta/2 (vertically) of the bottom grid row.
    if (g.y1 - kTriangularY > 0.5 * g.delta + 1e-15) {
        throw ConfigError(
            "grid step leaves the bottom band uncovered: first aligned row sits more than "
            "delta/2 above sqrt(3)/2; choose a step whose multiples land closer to sqrt(3)/2");
    }

    std::int64_t j = j1;
    for (;;) {
        const double y = static_cast<double>(j * g.step.q) / pow10;
        g.ys.push_back(y);
        if (y >= y_top) break;
        ++j;
        if (g.ys.size() > 20'000'000) {
            throw ConfigError("grid would exceed 2e7 rows; increase the step");
        }
    }
    g.y_top = g.ys.back();
    return g;
}

}  // namespace latcert
