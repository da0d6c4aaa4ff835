#pragma once

#include <cstdint>
#include <vector>

namespace latcert {

// Decimal grid step delta = q * 10^-d.  Exact integer bookkeeping keeps grid
// coordinates reproducible: x_i = (i*q) / 10^d evaluated once in double.
struct DecimalStep {
    std::int64_t q = 1;
    int d = 2;

    double value() const;
    // Parses a double into a decimal step; throws ConfigError when the value
    // is not a decimal fraction q * 10^-d with 1 <= d <= 9.
    static DecimalStep parse(double delta);
};

// Uniform grid covering the sweep rectangle [0, 1/2] x [y1, y_top]:
//   xs: 0, delta, ..., 1/2 inclusive (delta must divide 1/2 exactly);
//   y1: smallest grid-aligned multiple of delta >= sqrt(3)/2;
//   ys: y1, y1 + delta, ..., first value >= the requested top.
// Every point of the compact set { x in [0,1/2], sqrt(3)/2 <= y <= y_top,
// x^2 + y^2 >= 1 } then lies within delta*sqrt(2)/2 of a grid point; this
// needs y1 - sqrt(3)/2 <= delta/2, which grid construction enforces.
struct GridSpec {
    double delta = 0.01;
    DecimalStep step;
    std::vector<double> xs;
    std::vector<double> ys;
    double y1 = 0.0;
    double y_top = 0.0;

    std::size_t I() const { return xs.size(); }
    std::size_t J() const { return ys.size(); }
    std::size_t size() const { return xs.size() * ys.size(); }
};

// Builds the grid up to the first grid value >= y_top.
// Throws ConfigError when delta is not decimal, does not divide 1/2, or
// violates the bottom-edge covering condition above.
GridSpec build_grid_to(double y_top, double delta);

}  // namespace latcert
