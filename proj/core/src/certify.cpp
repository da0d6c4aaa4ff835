#include "latcert/certify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <utility>

#include "latcert/errors.hpp"
#include "latcert/parallel.hpp"
#include "pow_util.hpp"

namespace latcert {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Internal tolerance for the threshold enclosure inside the sweeps: far
// tighter than the k-decimal round-up needs, yet above the worst-case
// rounding floor of the eta zeta evaluations (their absolute radii cannot
// shrink below ~1e-9 at these exponents, see summation_radius).
constexpr double kThresholdTol = 1e-6;

// Tolerance of the cached triangular references in the fixed-grid sweep.
constexpr double kReferenceTol = 1e-8;

Interval interval_of(const CertifiedValue& v) { return Interval::from_certified(v); }

// Region hypothesis of the sandwich inequality
//     (m^2 + n^2)/2 <= (m + x n)^2 + y^2 n^2,
// namely y^2 - x^2 >= 1/2 with x in [0, 1/2]; it holds on the whole sweep
// rectangle (y >= sqrt(3)/2).  Checked inline at every grid point used, with
// one-ulp slack for the corner (1/2, sqrt(3)/2) where equality is exact.
void assert_sandwich_region(double x, double y) {
    if (!(x >= 0.0 && x <= 0.5 && y * y - x * x >= 0.5 - 1e-12)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") leaves the sandwich-inequality region";
        throw Error(os.str());
    }
}

}  // namespace

EtaConstants eta_constants(const ExponentPair& e, double tol) {
    e.validate();
    if (!(tol > 0.0)) throw ConfigError("eta_constants: tolerance must be positive");
    const double a = e.alpha, b = e.beta;

    // eta1 = 2^{1+a/2} 3^{-a/2} zeta(a); zeta tolerances are scaled by the
    // coefficient magnitudes so each eta radius stays below tol.
    const Interval c1 =
        pow(Interval::point(2.0), 1.0 + 0.5 * a) * pow(Interval::point(3.0), -0.5 * a);
    const Interval eta1 =
        c1 * interval_of(riemann_certified(a, tol / (4.0 * std::fmax(1.0, c1.mag()))));

    // eta2 = 2^{b/2} (a/b) zeta_{Z^2}(b)
    const Interval c2 =
        pow(Interval::point(2.0), 0.5 * b) * div(Interval::point(a), Interval::point(b));
    const Interval eta2 =
        c2 * interval_of(
                 epstein_certified(square_point(), b, tol / (4.0 * std::fmax(1.0, c2.mag()))));

    // eta3 = (a/b) zeta_T(b) - zeta_T(a)
    const Interval r = div(Interval::point(a), Interval::point(b));
    const double zt_tol = tol / (4.0 * (std::fmax(1.0, r.mag()) + 1.0));
    const Interval eta3 = r * interval_of(triangular_zeta_cached(b, zt_tol)) -
                          interval_of(triangular_zeta_cached(a, zt_tol));

    EtaConstants out{eta1.to_certified(), eta2.to_certified(), eta3.to_certified()};
    if (!(out.eta1.lo() > 0.0) || !(out.eta2.lo() > 0.0) || !(out.eta3.lo() > 0.0)) {
        // eta3 > 0 follows from s -> zeta_T(s)/s decreasing on (2, inf); a
        // non-positive enclosure would mean an internal inconsistency.
        throw Error("eta_constants: internal consistency failure, an eta enclosure is not "
                    "strictly positive");
    }
    return out;
}

namespace {

// Smallest multiple of 10^-k at or above v (exact integer numerator, then a
// guarded division so the result never lands below v).
double round_up_decimals(double v, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= 10.0;
    double num = std::ceil(v * p);
    double r = num / p;
    while (r < v) {
        num += 1.0;
        r = num / p;
    }
    return r;
}

}  // namespace

std::string ThresholdResult::y_bar_string() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", k, y_bar);
    return buf;
}

ThresholdResult threshold_y(const ExponentPair& e, double tol, int k) {
    e.validate();
    if (!(tol > 0.0)) throw ConfigError("threshold_y: tolerance must be positive");
    if (k < 1 || k > 12) throw ConfigError("threshold_y: rounding place k must lie in [1, 12]");

    ThresholdResult r;
    r.k = k;
    r.etas = eta_constants(e, tol);
    const Interval eta1 = interval_of(r.etas.eta1);
    const Interval eta2 = interval_of(r.etas.eta2);
    const Interval eta3 = interval_of(r.etas.eta3);

    Interval y;
    if (e.alpha == 2.0 * e.beta) {
        r.branch = ThresholdResult::Branch::quadratic;
        // eta1 u^2 - eta2 u + eta3 > 0 for u = y^{beta/2} above the larger
        // root; the threshold is that root taken back through u -> y.
        Interval disc = eta2 * eta2 - Interval::point(4.0) * eta1 * eta3;
        if (disc.hi < 0.0) {
            // No real root: the quadratic is positive for every u and the
            // inequality already holds on the whole strip.
            y = Interval::point(kTriangularY);
        } else {
            if (disc.lo < 0.0) disc.lo = 0.0;
            const Interval u = div(eta2 + sqrt(disc), Interval::point(2.0) * eta1);
            y = pow(u, 2.0 / e.beta);
        }
    } else {
        r.branch = ThresholdResult::Branch::general;
        // eta3 > 0, so eta1 y^{a/2} >= eta2 y^{b/2} suffices.
        y = pow(div(eta2, eta1), 2.0 / (e.alpha - e.beta));
    }
    r.y_exact = y.hi;
    r.y_lo = y.lo;
    r.y_bar = round_up_decimals(std::fmax(y.hi, kTriangularY), k);
    return r;
}

double paper_lipschitz(const ExponentPair& e, double y_bar, TruncationSpec t) {
    e.validate();
    if (!(y_bar >= kTriangularY)) {
        throw ConfigError("paper_lipschitz: y_bar must be at least sqrt(3)/2");
    }
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");

    // S(s) = 2^s s^2 ybar^{s-2} ( ybar^2 T1(s)^2 + T2(s)^2 ) with
    //   T1 = sum' 2|n|(|m| + 0.5|n|) / (m^2+n^2)^{s/2+1}
    //   T2 = sum' (m^2 + 0.25 n^2 + |m||n|) / (m^2+n^2)^{s/2+1},
    // both truncated at N in the canonical shell order.
    const auto S = [&](double s) {
        double t1 = 0.0, t2 = 0.0;
        for (int k = 1; k <= t.N; ++k) {
            double s1 = 0.0, s2 = 0.0;
            const double dk = static_cast<double>(k);
            auto add = [&](double m, double n) {
                const double r2 = m * m + n * n;
                const double pw = std::pow(r2, -0.5 * s - 1.0);
                const double am = std::fabs(m), an = std::fabs(n);
                s1 += 2.0 * an * (am + 0.5 * an) * pw;
                s2 += (m * m + 0.25 * n * n + am * an) * pw;
            };
            for (int sn = 0; sn < 2; ++sn) {
                const double n = sn == 0 ? -dk : dk;
                for (int m = -k; m <= k; ++m) add(static_cast<double>(m), n);
            }
            for (int sm = 0; sm < 2; ++sm) {
                const double m = sm == 0 ? -dk : dk;
                for (int n = -k + 1; n <= k - 1; ++n) add(m, static_cast<double>(n));
            }
            t1 += s1;
            t2 += s2;
        }
        return std::pow(2.0, s) * s * s * std::pow(y_bar, s - 2.0) *
               (y_bar * y_bar * t1 * t1 + t2 * t2);
    };

    const double z = epstein_partial({0.0, y_bar}, e.alpha, t);
    return z * (S(e.alpha) + S(e.beta));
}

double Cell::half_diag() const { return 0.5 * std::hypot(x_hi - x_lo, y_hi - y_lo); }

double Cell::distance_to(double px, double py) const {
    const double dx = std::fmax(std::fmax(x_lo - px, px - x_hi), 0.0);
    const double dy = std::fmax(std::fmax(y_lo - py, py - y_hi), 0.0);
    return std::hypot(dx, dy);
}

namespace {

struct CenterEval {
    CertifiedValue zeta;     // certified value at the cell center
    double grad_norm = 0.0;  // |grad zeta^N| at the center plus gradient tail
    std::uint64_t terms = 0;
};

// Value and gradient at the same truncation in one pass over the box, in the
// canonical shell order of the single-output kernels.
CenterEval combined_center(const DomainPoint& c, double s, double tol) {
    const TruncationSpec t = select_truncation(c, s, tol);
    const detail::HalfPow hp(s);
    const double y = c.y, x = c.x;
    const double invy = 1.0 / y;
    double z = 0.0, sx = 0.0, sy = 0.0;
    for (int k = 1; k <= t.N; ++k) {
        double zs = 0.0, xs = 0.0, ys = 0.0;
        const double dk = static_cast<double>(k);
        auto add = [&](double w, double n, double q) {
            const double qinv = 1.0 / q;
            const double pq = hp(q, qinv);  // q^{-s/2}
            const double pq1 = pq * qinv;   // q^{-s/2-1}
            zs += pq;
            xs += n * w * pq1;
            ys += (w * w - y * y * n * n) * pq1;
        };
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            const double xn = x * n;
            const double yn2 = y * n * n;
            for (int m = -k; m <= k; ++m) {
                const double w = static_cast<double>(m) + xn;
                add(w, n, w * w * invy + yn2);
            }
        }
        for (int sm = 0; sm < 2; ++sm) {
            const double m = sm == 0 ? -dk : dk;
            for (int n = -k + 1; n <= k - 1; ++n) {
                const double nd = static_cast<double>(n);
                const double w = m + x * nd;
                add(w, nd, w * w * invy + y * nd * nd);
            }
        }
        z += zs;
        sx += xs;
        sy += ys;
    }

    CenterEval out;
    out.terms = term_count(t);
    const double tail = epstein_tail_bound_general(c, s, t);
    const double rad = summation_radius(z, tail, out.terms);
    if (!(rad <= tol)) {
        throw ToleranceError("cell analysis: certified radius exceeds the requested tolerance");
    }
    out.zeta = {z, rad};
    const double gx = -(s / y) * sx;
    const double gy = s / (2.0 * y * y) * sy;
    // Worst-case rounding slop of the gradient sums.  AM-GM on q = w^2/y +
    // y n^2 gives |n w| <= q/2 and w^2 + y^2 n^2 = y q, so the absolute-term
    // sums of sx and sy are bounded by z/2 and y z; scaled by the gradient
    // prefactors, both components' rounding errors stay below
    // (s/y) * eps * T * z / 2 each (doubled for the product/combination
    // rounding of the terms themselves).
    const double eps = std::numeric_limits<double>::epsilon();
    const double grad_slop = 2.0 * (s / y) * eps * static_cast<double>(out.terms) * z;
    out.grad_norm = std::hypot(gx, gy) + epstein_gradient_tail_bound(y, s, t) + grad_slop;
    return out;
}

// Truncation of the Hessian-majorant sums; their tails are bounded
// explicitly below, so a small fixed box suffices.
constexpr int kHessianN = 48;

// y-prefactor worst case over [y_lo, y_hi] for the (monotone) power y^e.
double pow_pref(double y_lo, double y_hi, double ex) {
    return ex >= 0.0 ? std::pow(y_hi, ex) : std::pow(y_lo, ex);
}

struct HessBounds {
    double alpha_bound = 0.0;  // >= sup over the cell of ||Hess zeta(alpha)||_2
    double beta_bound = 0.0;
    std::uint64_t terms = 0;
};

// Uniform-over-the-cell bound on the spectral norm of the Hessian of
// (x, y) -> zeta(s), for both exponents in one pass.
//
// With f = y^{s/2} T^{-s/2}, T = (m + x n)^2 + y^2 n^2 (zeta = sum' f),
// termwise bounds using w^2 <= T and y^2 n^2 <= T:
//   |f_xx| <= s(s+3)        y^{s/2}   n^2     T^{-s/2-1}
//   |f_xy| <= (s(3s+4)/2)   y^{s/2-1} |n||w|  T^{-s/2-1}
//   |f_yy| <= (s/2)|s/2-1|  y^{s/2-2}         T^{-s/2}
//           +  s(2s+3)      y^{s/2}   n^2     T^{-s/2-1}.
// Per index pair the cell-worst case takes T at
//   T_min = w_min^2 + y_lo^2 n^2   (w_min = 0 when m + x n changes sign),
// |w| at w_max = max over the two x-edges, and the prefactor y^e at the
// monotone worst edge.  Box tails use T >= lambda (m^2 + n^2) with the
// cell-uniform least-eigenvalue bound lambda and the shell count 8k:
//   sum_{k>N} n^2 T^{-s/2-1}    <=  8 lambda^{-s/2-1} N^{2-s}/(s-2)
//   sum_{k>N} |n||w| T^{-s/2-1} <= 12 lambda^{-s/2-1} N^{2-s}/(s-2)
//   sum_{k>N} T^{-s/2}          <=  8 lambda^{-s/2}   N^{2-s}/(s-2).
// The spectral norm is bounded by the largest absolute row sum.
HessBounds hessian_majorant(const Cell& cell, const ExponentPair& e, int NH) {
    const double x_lo = cell.x_lo, x_hi = cell.x_hi;
    const double y_lo = cell.y_lo, y_hi = cell.y_hi;
    const detail::HalfPow hpa(e.alpha + 2.0);  // T^{-alpha/2-1}
    const detail::HalfPow hpb(e.beta + 2.0);   // T^{-beta/2-1}

    struct Sums {
        double s0 = 0.0;  // sum T^{-s/2}
        double s1 = 0.0;  // sum n^2 T^{-s/2-1}
        double s2 = 0.0;  // sum |n| |w| T^{-s/2-1}
    };
    Sums A, B;

    const double y_lo2 = y_lo * y_lo;
    for (int k = 1; k <= NH; ++k) {
        Sums sa, sb;
        const double dk = static_cast<double>(k);
        auto add = [&](double m, double n) {
            const double w1 = m + x_lo * n;
            const double w2 = m + x_hi * n;
            const double a1 = std::fabs(w1), a2 = std::fabs(w2);
            const double w_min = w1 * w2 <= 0.0 ? 0.0 : std::fmin(a1, a2);
            const double w_max = std::fmax(a1, a2);
            const double n2 = n * n;
            const double t_min = w_min * w_min + y_lo2 * n2;
            const double tinv = 1.0 / t_min;
            const double pa = hpa(t_min, tinv);  // T_min^{-alpha/2-1}
            const double pb = hpb(t_min, tinv);  // T_min^{-beta/2-1}
            const double nw = std::fabs(n) * w_max;
            sa.s0 += pa * t_min;
            sa.s1 += n2 * pa;
            sa.s2 += nw * pa;
            sb.s0 += pb * t_min;
            sb.s1 += n2 * pb;
            sb.s2 += nw * pb;
        };
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            for (int m = -k; m <= k; ++m) add(static_cast<double>(m), n);
        }
        for (int sm = 0; sm < 2; ++sm) {
            const double m = sm == 0 ? -dk : dk;
            for (int n = -k + 1; n <= k - 1; ++n) add(m, static_cast<double>(n));
        }
        A.s0 += sa.s0;
        A.s1 += sa.s1;
        A.s2 += sa.s2;
        B.s0 += sb.s0;
        B.s1 += sb.s1;
        B.s2 += sb.s2;
    }

    // Cell-uniform lower bound on the least Gram eigenvalue: decreasing in
    // the trace 1 + x^2 + y^2 and increasing in the determinant y^2.
    const double t_max = 1.0 + x_hi * x_hi + y_hi * y_hi;
    const double lam =
        2.0 * y_lo2 / (t_max + std::sqrt(std::fmax(t_max * t_max - 4.0 * y_lo2, 0.0)));

    auto finish = [&](double s, const Sums& S) {
        const double nf = std::pow(static_cast<double>(NH), 2.0 - s) / (s - 2.0);
        const double s1 = S.s1 + 8.0 * std::pow(lam, -0.5 * s - 1.0) * nf;
        const double s2 = S.s2 + 12.0 * std::pow(lam, -0.5 * s - 1.0) * nf;
        const double s0 = S.s0 + 8.0 * std::pow(lam, -0.5 * s) * nf;
        const double bxx = s * (s + 3.0) * pow_pref(y_lo, y_hi, 0.5 * s) * s1;
        const double bxy = 0.5 * s * (3.0 * s + 4.0) * pow_pref(y_lo, y_hi, 0.5 * s - 1.0) * s2;
        const double byy =
            0.5 * s * std::fabs(0.5 * s - 1.0) * pow_pref(y_lo, y_hi, 0.5 * s - 2.0) * s0 +
            s * (2.0 * s + 3.0) * pow_pref(y_lo, y_hi, 0.5 * s) * s1;
        // One-sided inflation so accumulated rounding (well below 1e-10
        // relative at this box size) cannot shave the upper bound.
        return std::fmax(bxx + bxy, bxy + byy) * (1.0 + 1e-7);
    };

    HessBounds out;
    out.alpha_bound = finish(e.alpha, A);
    out.beta_bound = finish(e.beta, B);
    out.terms = term_count({NH});
    return out;
}

struct CellData {
    CertifiedValue Q;  // enclosure at the cell center
    double L = 0.0;    // Lipschitz bound for Q over the cell
    std::uint64_t terms = 0;
};

// Shared analysis behind local_lipschitz and the adaptive driver: certified
// center values, mean-value gradient bounds over the cell, and the quotient
// Lipschitz bound
//     L = Q_max (G_alpha / Dalpha_min + G_beta / Dbeta_min).
// This dominates sup ||grad Q|| = sup ||grad zeta(alpha) - Q grad
// zeta(beta)|| / Dbeta since Q_max / Dalpha_min >= 1 / Dbeta_min.
CellData analyze_cell(const Cell& cell, const ExponentPair& e, double tol) {
    const DomainPoint c{cell.cx(), cell.cy()};
    assert_sandwich_region(c.x, c.y);

    const CenterEval fa = combined_center(c, e.alpha, tol);
    const CenterEval fb = combined_center(c, e.beta, tol);
    const CertifiedValue ta = triangular_zeta_cached(e.alpha, tol);
    const CertifiedValue tb = triangular_zeta_cached(e.beta, tol);
    const HessBounds h = hessian_majorant(cell, e, kHessianN);

    const double hd = cell.half_diag();
    // Mean value theorem: |grad zeta(p)| <= |grad zeta(center)| + ||Hess|| hd
    // for any p in the cell.
    const double ga = fa.grad_norm + h.alpha_bound * hd;
    const double gb = fb.grad_norm + h.beta_bound * hd;

    const Interval da = interval_of(fa.zeta) - interval_of(ta);
    const Interval db = interval_of(fb.zeta) - interval_of(tb);

    CellData out;
    out.terms = fa.terms + fb.terms + h.terms;
    if (db.contains_zero()) {
        throw NearTriangularError(
            "cell center denominator enclosure contains zero; the cell belongs to the "
            "near-triangular fallback");
    }
    out.Q = div(da, db).to_certified();

    // Difference bounds over the whole cell, again by the mean value theorem.
    const double da_min = da.lo - ga * hd;
    const double da_max = da.hi + ga * hd;
    const double db_min = db.lo - gb * hd;
    if (!(da_min > 0.0) || !(db_min > 0.0)) {
        throw NearTriangularError(
            "cell reaches too close to the triangular point for positive difference bounds");
    }
    const double q_max = da_max / db_min;
    out.L = q_max * (ga / da_min + gb / db_min);
    return out;
}

// Deterministic sampled check of Q > target on the ball around the
// triangular point: matched-truncation differences at fixed N cancel the
// truncation error of nearby lattices, which is accurate arbitrarily close
// to the center but is not a certified enclosure.
FallbackCheck run_fallback_check(const ExponentPair& e, double epsilon, int samples,
                                 double target, int workers) {
    FallbackCheck fc;
    fc.samples = samples;

    const TruncationSpec t{100};
    const double tza = epstein_partial(triangular_point(), e.alpha, t);
    const double tzb = epstein_partial(triangular_point(), e.beta, t);

    // Fixed-seed polar sampling with radius in [eps*1e-3, eps]; the points
    // are generated sequentially so the set is identical for every worker
    // count, then evaluated into per-index slots.
    std::mt19937_64 rng(0x1a7cec7ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<DomainPoint> pts(static_cast<std::size_t>(samples));
    for (auto& p : pts) {
        const double r = epsilon * (1e-3 + (1.0 - 1e-3) * std::sqrt(unit(rng)));
        const double th = kTwoPi * unit(rng);
        p = {kTriangularX + r * std::cos(th), kTriangularY + r * std::sin(th)};
    }

    std::vector<double> qs(pts.size());
    parallel_for(pts.size(), workers, [&](std::size_t i) {
        const double da = epstein_partial(pts[i], e.alpha, t) - tza;
        const double db = epstein_partial(pts[i], e.beta, t) - tzb;
        qs[i] = da / db;
    });

    fc.min_Q = qs[0];
    fc.max_Q = qs[0];
    for (const double q : qs) {
        fc.min_Q = std::fmin(fc.min_Q, q);
        fc.max_Q = std::fmax(fc.max_Q, q);
    }
    fc.passed = fc.min_Q > target;
    return fc;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Distance from a point to the farthest point of the cell (attained at a
// corner).
double cell_max_distance(const Cell& c, double px, double py) {
    double far = 0.0;
    for (const double cx : {c.x_lo, c.x_hi}) {
        for (const double cy : {c.y_lo, c.y_hi}) {
            far = std::fmax(far, std::hypot(cx - px, cy - py));
        }
    }
    return far;
}

}  // namespace

double local_lipschitz(const Cell& cell, const ExponentPair& e, double tol) {
    e.validate();
    if (!(tol > 0.0)) throw ConfigError("local_lipschitz: tolerance must be positive");
    if (!(cell.x_lo >= 0.0 && cell.x_hi <= 0.5 && cell.x_lo < cell.x_hi &&
          cell.y_lo < cell.y_hi && cell.y_lo >= kTriangularY - 1e-15)) {
        throw ConfigError(
            "local_lipschitz: cell must be a nonempty box inside [0, 1/2] x [sqrt(3)/2, inf)");
    }
    return analyze_cell(cell, e, tol).L;
}

GridSpec build_grid(const ThresholdResult& threshold, double delta) {
    if (!(threshold.y_bar >= threshold.y_exact) || !(threshold.y_bar > 0.0)) {
        throw ConfigError("build_grid: threshold has not been rounded up");
    }
    return build_grid_to(threshold.y_bar, delta);
}

CertificationReport sweep_paper_mode(const ExponentPair& e, const GridSpec& grid, double M,
                                     TruncationSpec t, int workers) {
    e.validate();
    if (!(M >= 0.0) || !std::isfinite(M)) {
        throw ConfigError("sweep_paper_mode: M must be a finite nonnegative value");
    }
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    if (grid.size() == 0) throw ConfigError("sweep grid is empty");

    const auto t0 = std::chrono::steady_clock::now();
    const int w = resolve_workers(workers);

    CertificationReport rep;
    rep.exponents = e;
    rep.mode = CertificationReport::Mode::paper;
    rep.threshold = threshold_y(e, kThresholdTol);
    rep.grid = grid;
    rep.M = M;
    rep.margin_term = M * grid.delta * std::sqrt(2.0) / 2.0;
    rep.margin_required = e.target_margin();
    rep.grid_points = grid.size();

    const CertifiedValue ta = triangular_zeta_cached(e.alpha, kReferenceTol);
    const CertifiedValue tb = triangular_zeta_cached(e.beta, kReferenceTol);

    struct Slot {
        double lo = 0.0, mid = 0.0, rad = 0.0;
        bool refused = false;
    };
    std::vector<Slot> slots(grid.size());
    std::atomic<std::uint64_t> terms{0};
    const std::size_t J = grid.J();

    parallel_for(grid.size(), w, [&](std::size_t idx) {
        const double x = grid.xs[idx / J];
        const double y = grid.ys[idx % J];
        assert_sandwich_region(x, y);
        const DomainPoint p{x, y};
        // One-sided truncation: the omitted terms are positive, so the true
        // zeta lies in [partial, partial + tail]; the rounding slop from the
        // shared radius model is applied symmetrically.
        const double pa = epstein_partial(p, e.alpha, t);
        const double pb = epstein_partial(p, e.beta, t);
        const double sa = summation_radius(pa, 0.0, term_count(t));
        const double sb = summation_radius(pb, 0.0, term_count(t));
        const Interval za{pa - sa, pa + epstein_tail_bound(y, e.alpha, t) + sa};
        const Interval zb{pb - sb, pb + epstein_tail_bound(y, e.beta, t) + sb};
        const Interval da = za - interval_of(ta);
        const Interval db = zb - interval_of(tb);
        terms.fetch_add(2 * term_count(t));
        Slot& s = slots[idx];
        if (db.contains_zero()) {
            s.refused = true;
            return;
        }
        const CertifiedValue q = div(da, db).to_certified();
        s.lo = q.lo();
        s.mid = q.mid;
        s.rad = q.rad;
    });

    // Position-fixed reduction: the argmin is the first index attaining the
    // minimum, independent of worker count.
    bool found = false;
    std::size_t best = 0;
    for (std::size_t idx = 0; idx < slots.size(); ++idx) {
        if (slots[idx].refused) {
            ++rep.refused_points;
            continue;
        }
        if (!found || slots[idx].lo < slots[best].lo) {
            best = idx;
            found = true;
        }
    }
    if (!found) throw Error("sweep_paper_mode: every grid point was refused");
    rep.min_Q = {slots[best].mid, slots[best].rad};
    rep.argmin_x = grid.xs[best / J];
    rep.argmin_y = grid.ys[best % J];

    bool ok = rep.min_Q.lo() - rep.margin_term > rep.margin_required;
    if (rep.refused_points > 0) {
        // Refused points sit within a tail-width of the triangular point,
        // far inside a ball of one grid pitch; cover them with the sampled
        // check used by the adaptive fallback.
        rep.fallback_check = run_fallback_check(e, grid.delta, 10000, rep.margin_required, w);
        ok = ok && rep.fallback_check.passed;
    }
    rep.verdict = ok;

    rep.stats.zeta_terms = terms.load();
    rep.stats.workers = w;
    rep.stats.wall_ms = elapsed_ms(t0);
    return rep;
}

void AdaptiveConfig::validate() const {
    if (!(delta > 0.0 && delta <= 0.25)) {
        throw ConfigError("adaptive cell pitch must lie in (0, 0.25]");
    }
    if (max_depth < 0 || max_depth > 24) throw ConfigError("max_depth must lie in [0, 24]");
    if (!(epsilon >= 0.0 && epsilon <= 0.2)) {
        throw ConfigError("fallback ball radius must lie in [0, 0.2]");
    }
    if (!(tol > 0.0)) throw ConfigError("zeta tolerance must be positive");
    if (!(margin >= 0.0)) throw ConfigError("margin override must be nonnegative");
    if (fallback_samples < 1) throw ConfigError("fallback_samples must be at least 1");
}

CertificationReport certify_adaptive(const ExponentPair& e, const AdaptiveConfig& config) {
    e.validate();
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int w = resolve_workers(config.workers);

    CertificationReport rep;
    rep.exponents = e;
    rep.mode = CertificationReport::Mode::adaptive;
    rep.threshold = threshold_y(e, kThresholdTol);
    rep.margin_required = config.margin > 0.0 ? config.margin : e.target_margin();

    // Descending tolerance ladder.  Margins are O(1) over most of the
    // rectangle, so a coarse certified enclosure decides the bulk of the
    // cells at a fraction of the summation cost; the configured tolerance is
    // the finest escalation level.  The ladder also respects the rounding
    // floor of the radius model: absolute radii below eps * terms * |zeta|
    // are unreachable (zeta grows like y^{s/2} near the top of the
    // rectangle), and an evaluation that fails for that reason simply stops
    // the escalation instead of aborting the sweep.
    std::vector<double> ladder;
    for (const double level : {1e-4, 1e-6}) {
        if (level > config.tol) ladder.push_back(level);
    }
    ladder.push_back(config.tol);

    // Depth-0 tiling of [0, 1/2] x [sqrt(3)/2, y_bar]: edges are exact
    // rational fractions of the spans so the union covers the rectangle with
    // no gaps and the top/right edges land exactly on the bounds.
    const double y0 = kTriangularY;
    const double y1 = rep.threshold.y_bar;
    const std::size_t cols =
        static_cast<std::size_t>(std::llround(std::ceil(0.5 / config.delta - 1e-9)));
    const std::size_t rows =
        static_cast<std::size_t>(std::llround(std::ceil((y1 - y0) / config.delta - 1e-9)));
    const auto x_edge = [&](std::size_t i) {
        return 0.5 * static_cast<double>(i) / static_cast<double>(cols);
    };
    const auto y_edge = [&](std::size_t j) {
        return j == rows ? y1
                         : y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(rows);
    };
    rep.grid.delta = config.delta;
    rep.grid.y1 = y0;
    rep.grid.y_top = y1;

    struct Work {
        Cell cell;
        int depth = 0;
    };
    std::vector<Work> frontier;
    frontier.reserve(cols * rows);
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t i = 0; i < cols; ++i) {
            frontier.push_back({{x_edge(i), x_edge(i + 1), y_edge(j), y_edge(j + 1)}, 0});
        }
    }

    enum class Outcome { certified, subdivide, fallback, failed, near };
    struct Slot {
        Outcome oc = Outcome::failed;
        CellVerdict v;
        std::uint64_t terms = 0;
    };

    const double target = rep.margin_required;
    bool any_fallback = false;
    bool have_min = false;

    // Breadth-first by depth; within a level cells are evaluated into
    // per-index slots and reduced in index order, and children are appended
    // in a fixed order, so the whole cell stream is scheduling-independent.
    while (!frontier.empty()) {
        std::vector<Slot> slots(frontier.size());
        parallel_for(frontier.size(), w, [&](std::size_t idx) {
            const Work& wk = frontier[idx];
            Slot& s = slots[idx];
            s.v.cell = wk.cell;
            s.v.depth = wk.depth;
            // A cell fully inside the closed epsilon-ball is covered by the
            // sampled fallback check.  Cells merely straddling the ball edge
            // are refined further (their outside part certifies normally),
            // so the region left to the fallback shrinks to the ball itself
            // plus at most a half-diagonal skin at the depth cap.
            if (cell_max_distance(wk.cell, kTriangularX, kTriangularY) <= config.epsilon) {
                s.oc = Outcome::fallback;
                s.v.status = CellStatus::fallback;
                return;
            }
            const double hd = wk.cell.half_diag();
            try {
                CellData d;
                bool have = false;
                for (std::size_t li = 0; li < ladder.size(); ++li) {
                    try {
                        const CellData cand = analyze_cell(wk.cell, e, ladder[li]);
                        s.terms += cand.terms;
                        d = cand;
                        have = true;
                    } catch (const ToleranceError&) {
                        // Finer radii are unreachable here; decide at the
                        // best level reached.
                        break;
                    } catch (const NearTriangularError&) {
                        // A tighter enclosure may still separate the
                        // denominator from zero; escalate before giving up.
                        if (li + 1 == ladder.size()) throw;
                        continue;
                    }
                    const bool decided = d.Q.lo() - d.L * hd - target > 0.0 ||
                                         d.Q.hi() + d.L * hd <= target;
                    if (decided) break;
                }
                if (!have) {
                    throw ToleranceError(
                        "adaptive sweep: no ladder level reaches a certifiable radius for a "
                        "cell; loosen the zeta tolerance");
                }
                s.v.Q = d.Q;
                s.v.lipschitz = d.L;
                s.v.margin = d.Q.lo() - d.L * hd - target;
                if (s.v.margin > 0.0) {
                    s.oc = Outcome::certified;
                    s.v.status = CellStatus::certified;
                } else if (d.Q.hi() + d.L * hd <= target) {
                    // Impossible cell: even the optimistic end of the
                    // enclosure cannot clear the target anywhere inside.
                    s.oc = Outcome::failed;
                    s.v.status = CellStatus::failed;
                } else {
                    s.oc = Outcome::subdivide;
                    s.v.status = CellStatus::subdivided;
                }
            } catch (const NearTriangularError&) {
                // Outside the ball but with a non-positive difference bound:
                // refine toward the ball (children either certify or land in
                // the fallback).
                s.oc = Outcome::near;
                s.v.status = CellStatus::subdivided;
            }
        });

        std::vector<Work> next;
        for (std::size_t idx = 0; idx < slots.size(); ++idx) {
            Slot& s = slots[idx];
            const Work& wk = frontier[idx];
            rep.stats.zeta_terms += s.terms;
            rep.max_depth_used = std::max(rep.max_depth_used, wk.depth);

            const bool has_q = s.oc == Outcome::certified || s.oc == Outcome::failed ||
                               s.oc == Outcome::subdivide;
            if (has_q) {
                rep.max_local_lipschitz = std::fmax(rep.max_local_lipschitz, s.v.lipschitz);
                if (!have_min || s.v.Q.lo() < rep.min_Q.lo()) {
                    have_min = true;
                    rep.min_Q = s.v.Q;
                    rep.argmin_x = wk.cell.cx();
                    rep.argmin_y = wk.cell.cy();
                }
            }

            const bool subdividing =
                (s.oc == Outcome::subdivide || s.oc == Outcome::near) && wk.depth < config.max_depth;
            if ((s.oc == Outcome::subdivide || s.oc == Outcome::near) && !subdividing) {
                if (wk.cell.distance_to(kTriangularX, kTriangularY) < config.epsilon) {
                    // Depth-capped sliver straddling the ball edge: covered
                    // by the fallback (it reaches beyond the ball by at most
                    // its half-diagonal).
                    s.oc = Outcome::fallback;
                    s.v.status = CellStatus::fallback;
                } else {
                    // Depth exhausted: report the offending cell as failed.
                    s.oc = Outcome::failed;
                    s.v.status = CellStatus::failed;
                }
            }

            switch (s.oc) {
                case Outcome::certified:
                    ++rep.certified_cells;
                    if (config.keep_cells) rep.cells.push_back(s.v);
                    break;
                case Outcome::fallback:
                    ++rep.fallback_cells;
                    any_fallback = true;
                    if (config.keep_cells) rep.cells.push_back(s.v);
                    break;
                case Outcome::failed:
                    ++rep.failed_cells;
                    rep.cells.push_back(s.v);  // offending cells are always listed
                    break;
                case Outcome::subdivide:
                case Outcome::near: {
                    ++rep.subdivided_cells;
                    if (config.keep_cells) rep.cells.push_back(s.v);
                    const Cell& c = wk.cell;
                    const double xm = c.cx(), ym = c.cy();
                    next.push_back({{c.x_lo, xm, c.y_lo, ym}, wk.depth + 1});
                    next.push_back({{xm, c.x_hi, c.y_lo, ym}, wk.depth + 1});
                    next.push_back({{c.x_lo, xm, ym, c.y_hi}, wk.depth + 1});
                    next.push_back({{xm, c.x_hi, ym, c.y_hi}, wk.depth + 1});
                    break;
                }
            }
        }
        frontier = std::move(next);
    }

    bool ok = rep.failed_cells == 0;
    if (any_fallback) {
        rep.fallback_check =
            run_fallback_check(e, config.epsilon, config.fallback_samples, target, w);
        ok = ok && rep.fallback_check.passed;
    }
    rep.verdict = ok;

    rep.stats.workers = w;
    rep.stats.wall_ms = elapsed_ms(t0);
    return rep;
}

}  // namespace latcert
