#pragma once

#include <vector>

#include "latcert/certified.hpp"
#include "latcert/lattice.hpp"
#include "latcert/zeta.hpp"

namespace latcert {

// Exponents of the interaction r^{-alpha}, r^{-beta}; lattice sums converge
// in the plane only for exponents > 2.
struct ExponentPair {
    double alpha = 12.0;
    double beta = 6.0;

    void validate() const;  // throws ConfigError unless alpha > beta > 2
    double target_margin() const { return alpha / beta; }
};

// Potential f(r) = a r^{-alpha} - b r^{-beta} with a, b > 0.
struct LJParams {
    ExponentPair exponents;
    double a = 1.0;
    double b = 1.0;

    void validate() const;
};

struct EnergyValue {
    double value = 0.0;
    struct Parts {
        double repulsive = 0.0;   // zeta_L(alpha) contribution, before the a/V factor
        double attractive = 0.0;  // zeta_L(beta) contribution, before the b/V factor
    } parts;
};

// Energy per point of sqrt(V) * L:
//     E = a V^{-alpha/2} zeta_L(alpha) - b V^{-beta/2} zeta_L(beta),
// with both zetas certified to absolute tolerance tol (midpoints used).
EnergyValue lj_energy(const DomainPoint& p, double V, const LJParams& params, double tol);

// Unique minimizer of V -> lj_energy(p, V):
//     V_L = ( a*alpha*zeta_L(alpha) / (b*beta*zeta_L(beta)) )^{2/(alpha-beta)}.
double optimal_volume(const DomainPoint& p, const LJParams& params, double tol);

// Closed form of the minimal dilated energy min_V E(V); strictly negative:
//     b^{alpha/(alpha-beta)} zeta_L(beta)^{alpha/(alpha-beta)}
//     ---------------------------------------------------------- *
//     a^{beta/(alpha-beta)}  zeta_L(alpha)^{beta/(alpha-beta)}
//     (beta/alpha)^{beta/(alpha-beta)} * (beta/alpha - 1).
double min_dilated_energy(const DomainPoint& p, const LJParams& params, double tol);

// Volume below which the shape minimizer is guaranteed by the sweep:
//     (a*alpha / (b*beta))^{2/(alpha-beta)}.
double global_volume_bound(const LJParams& params);

// Certified enclosure of the zeta quotient
//     Q(x, y) = (zeta_L(alpha) - zeta_T(alpha)) / (zeta_L(beta) - zeta_T(beta)),
// T the triangular lattice.  Each of the four zeta values is certified to
// tol/4; intervals are divided with outward rounding.  Throws
// NearTriangularError when the denominator enclosure contains zero.
CertifiedValue quotient_Q(const DomainPoint& p, const ExponentPair& e, double tol);

struct ScanRow {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

struct GridSpec;  // defined in grid.hpp

struct ScanResult {
    std::vector<ScanRow> rows;   // grid order: x-major, then y
    std::size_t argmin = 0;      // index of the smallest value
};

// Evaluates the log-weighted sum F_s on every grid point (truncation t) and
// reports the argmin.  Numerical evidence for the minimality conjecture, not
// a certification.
ScanResult conjecture_scan(double s, const GridSpec& grid, TruncationSpec t, int workers);

}  // namespace latcert
