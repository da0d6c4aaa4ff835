#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latcert/certified.hpp"
#include "latcert/energy.hpp"
#include "latcert/grid.hpp"

namespace latcert {

// The three positive constants of the threshold reduction:
//   eta1 = 2^{1+alpha/2} 3^{-alpha/2} zeta(alpha)
//   eta2 = 2^{beta/2} (alpha/beta) zeta_{Z^2}(beta)
//   eta3 = (alpha/beta) zeta_T(beta) - zeta_T(alpha)      (T = triangular)
struct EtaConstants {
    CertifiedValue eta1, eta2, eta3;
};

EtaConstants eta_constants(const ExponentPair& e, double tol);

// Height threshold: above y_exact the quotient inequality Q > alpha/beta
// holds automatically, so certification is reduced to the compact set
// y <= y_bar.  Two branches:
//   general (alpha != 2*beta):  y = (eta2/eta1)^{2/(alpha-beta)}
//   quadratic (alpha == 2*beta): y = ((eta2 + sqrt(eta2^2 - 4*eta1*eta3))
//                                     / (2*eta1))^{2/beta}
// y_exact is the certified upper enclosure; y_bar rounds it up at decimal
// place k, so 10^k * y_bar is an integer and y_bar >= y_exact.
struct ThresholdResult {
    double y_exact = 0.0;  // upper enclosure of the threshold value
    double y_lo = 0.0;     // lower enclosure (diagnostic)
    double y_bar = 0.0;
    int k = 2;
    enum class Branch { quadratic, general } branch = Branch::general;
    EtaConstants etas;

    // y_bar formatted with exactly k decimals ("7.52", "2.78", ...).
    std::string y_bar_string() const;
};

ThresholdResult threshold_y(const ExponentPair& e, double tol, int k = 2);

// Literal evaluation of the printed global Lipschitz formula
//     M = zeta_Lbar(alpha) * (S(alpha) + S(beta)),
//     S(s) = 2^s s^2 ybar^{s-2} * ( ybar^2 * T1(s)^2 + T2(s)^2 ),
//     T1(s) = sum' 2|n|(|m| + 0.5|n|) / (m^2+n^2)^{s/2+1},
//     T2(s) = sum' (m^2 + 0.25 n^2 + |m||n|) / (m^2+n^2)^{s/2+1},
// with Lbar the lattice of (0, ybar) and all sums truncated at N.  Reported
// verbatim; far larger than useful (S bounds a squared gradient norm), so
// certification never consumes it -- see local_lipschitz.
double paper_lipschitz(const ExponentPair& e, double y_bar, TruncationSpec t);

// Axis-aligned cell of a sweep tiling.
struct Cell {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;

    double cx() const { return 0.5 * (x_lo + x_hi); }
    double cy() const { return 0.5 * (y_lo + y_hi); }
    double half_diag() const;
    // Distance from the cell (as a set) to a point; 0 when inside.
    double distance_to(double px, double py) const;
};

// Upper bound for sup of the quotient-gradient norm over the cell:
//
//     L = Q_max * ( G_alpha / Dalpha_min + G_beta / Dbeta_min ),
//
// where for s in {alpha, beta}:
//   G_s      >= sup_cell |grad zeta(s)|   (center gradient + certified tail
//               + Hessian-norm majorant * half-diagonal, mean value theorem),
//   Ds_min   <= inf_cell (zeta_L(s) - zeta_T(s))  (center enclosure minus
//               G_s * half-diagonal),
//   Dalpha_max >= sup_cell Delta_alpha, Q_max = Dalpha_max / Dbeta_min.
//
// Throws NearTriangularError when Dbeta_min <= 0 (cell too close to the
// triangular point; the adaptive driver owns that fallback).
double local_lipschitz(const Cell& cell, const ExponentPair& e, double tol);

// Grid for the fixed-step sweep, built from the threshold height.
GridSpec build_grid(const ThresholdResult& threshold, double delta);

enum class CellStatus { certified, subdivided, fallback, failed };

struct CellVerdict {
    Cell cell;
    int depth = 0;
    CertifiedValue Q;        // enclosure at the cell center
    double lipschitz = 0.0;  // local bound (0 for fallback cells)
    double margin = 0.0;     // Q.lo - lipschitz * half_diag - target
    CellStatus status = CellStatus::failed;
};

// Deterministic sampled check of Q > target inside the fallback ball around
// the triangular point.  Uses matched-truncation differences (the tails of
// nearby lattices cancel), which is accurate but not a certified enclosure;
// reports label it as such.
struct FallbackCheck {
    int samples = 0;
    double min_Q = 0.0;
    double max_Q = 0.0;
    bool passed = false;
    std::string label = "sampled-check-not-certified";
};

struct RunStats {
    std::uint64_t zeta_terms = 0;  // terms summed in lattice kernels
    double wall_ms = 0.0;
    int workers = 1;
};

struct CertificationReport {
    ExponentPair exponents;
    enum class Mode { paper, adaptive } mode = Mode::paper;
    ThresholdResult threshold;
    GridSpec grid;                  // paper mode; adaptive stores the depth-0 tiling pitch
    double M = 0.0;                 // paper mode: the supplied global constant
    double margin_term = 0.0;       // paper mode: M * delta * sqrt(2)/2
    CertifiedValue min_Q;           // smallest center/grid enclosure seen
    double argmin_x = 0.0, argmin_y = 0.0;
    double margin_required = 2.0;   // alpha/beta (or an override)
    bool verdict = false;

    // Adaptive bookkeeping.
    std::vector<CellVerdict> cells;          // every terminal cell + subdivided parents
    std::size_t certified_cells = 0;
    std::size_t subdivided_cells = 0;
    std::size_t fallback_cells = 0;
    std::size_t failed_cells = 0;
    int max_depth_used = 0;
    double max_local_lipschitz = 0.0;
    FallbackCheck fallback_check;

    // Paper-mode bookkeeping.
    std::size_t grid_points = 0;
    std::size_t refused_points = 0;  // near-triangular refusals routed to fallback

    RunStats stats;
};

// Fixed-grid sweep: evaluates the quotient enclosure at every grid point from
// partial sums at truncation t (tail-bound radii; the triangular reference is
// certified tightly), then applies the uniform margin:
//     verdict = ( min_grid (Q.mid - Q.rad) - M * delta * sqrt(2)/2 > target ).
// Near-triangular refusals are excluded from the minimum, counted, and the
// fallback sampled check is run instead.
CertificationReport sweep_paper_mode(const ExponentPair& e, const GridSpec& grid, double M,
                                     TruncationSpec t, int workers);

struct AdaptiveConfig {
    double delta = 0.01;      // depth-0 cell pitch
    int max_depth = 8;        // quadtree subdivision limit
    double epsilon = 0.01;    // fallback ball radius around the triangular point
    double tol = 1e-8;        // finest absolute tolerance per zeta evaluation
                              // (cells are screened through a descending
                              // tolerance ladder and escalate to this level
                              // only when the margin test needs it)
    double margin = 0.0;      // 0 => alpha/beta
    int workers = 0;          // 0 => default_workers()
    int fallback_samples = 10000;
    bool keep_cells = true;   // retain per-cell verdicts in the report

    void validate() const;
};

// Adaptive certification: tiles [0, 1/2] x [sqrt(3)/2, y_bar] with cells of
// pitch delta; a cell is certified when
//     Q(center).lo - local_lipschitz(cell) * half_diagonal > target,
// impossible cells (Q(center).hi + bound * half_diagonal <= target) fail
// immediately, and the rest subdivide quadtree-style until max_depth.  Cells
// contained in the epsilon-ball around the triangular point are covered by
// the sampled fallback check instead; cells straddling the ball edge refine
// until containment (or until the depth cap, where the remaining sliver
// joins the fallback), so the uncertified region is the ball itself up to a
// half-diagonal skin.  Deterministic: cells are processed in breadth-first
// index order and reductions are position-fixed, so reports are identical
// for any worker count.
CertificationReport certify_adaptive(const ExponentPair& e, const AdaptiveConfig& config);

}  // namespace latcert
