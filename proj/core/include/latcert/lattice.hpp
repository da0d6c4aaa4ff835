#pragma once

#include <cmath>

namespace latcert {

// A unit-covolume planar lattice given by its shape parameters (x, y).
// The associated quadratic form is
//
//     Q(m, n) = (m + x*n)^2 / y + y * n^2,
//
// i.e. the squared length of m*u + n*v for the basis returned by
// basis_from_domain_point().  Every (x, y) with y > 0 defines a genuine
// lattice; the representation is unique (up to rotation/reflection) exactly
// when (x, y) lies in the half-fundamental domain
//
//     D = { y > 0,  0 <= x <= 1/2,  x^2 + y^2 >= 1 },
//
// in which case `reduced` should be set.  Sweeps evaluate on full rectangles
// that include non-reduced points below the unit circle; those are valid
// lattices, just not canonical representatives.
struct DomainPoint {
    double x = 0.0;
    double y = 1.0;
    bool reduced = false;
};

// Canonical shape parameters of the triangular (hexagonal) lattice and of the
// square lattice.
inline constexpr double kTriangularX = 0.5;
inline const double kTriangularY = std::sqrt(3.0) / 2.0;

inline DomainPoint triangular_point() { return {kTriangularX, kTriangularY, true}; }
inline DomainPoint square_point() { return {0.0, 1.0, true}; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// A lattice basis; the lattice is Z*u + Z*v, with covolume |det(u, v)|.
struct Basis {
    Vec2 u;
    Vec2 v;

    double det() const { return u.x * v.y - u.y * v.x; }
    double covolume() const { return std::fabs(det()); }
};

// sqrt(V) times the unit-covolume lattice of `shape`; its quadratic form is
// V * Q_shape(m, n) termwise.
struct ScaledLattice {
    DomainPoint shape;
    double covolume = 1.0;
};

// Result of reducing an arbitrary basis: the unique reduced shape plus the
// covolume of the input lattice.
struct ReducedLattice {
    DomainPoint point;
    double covolume = 1.0;
};

// Q(m, n) = (m + x*n)^2 / y + y*n^2.  Total for y > 0; zero iff (m,n) = (0,0).
double quadratic_form(const DomainPoint& p, long long m, long long n);

// Basis u = (1/sqrt(y), 0), v = (x/sqrt(y), sqrt(y)); |det| = 1 and
// |m u + n v|^2 == quadratic_form(p, m, n).
Basis basis_from_domain_point(const DomainPoint& p);

// Gauss-Lagrange reduction to the half-fundamental domain.  Throws
// ConfigError on a (near-)degenerate basis.  Boundary ties are canonicalized
// to x in [0, 1/2].
ReducedLattice reduce_to_domain(const Basis& b);

// Membership in D (closed conditions, exact floating-point comparisons).
bool in_domain(double x, double y);

// Least eigenvalue of the Gram matrix [[1, x], [x, x^2 + y^2]] of the form
// T(m, n) = (m + x n)^2 + y^2 n^2 = y * Q(m, n).  Used by tail bounds:
// T >= lambda_min * (m^2 + n^2) for all integers (m, n).
double gram_least_eigenvalue(double x, double y);

}  // namespace latcert
