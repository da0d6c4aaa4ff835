#include "latcert/zeta.hpp"

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#include "latcert/errors.hpp"
#include "pow_util.hpp"

namespace latcert {

namespace {

void require_convergent(double s) {
    if (!(s > 2.0)) {
        std::ostringstream os;
        os << "lattice sum diverges for s <= 2 (got s = " << s << ")";
        throw ConfigError(os.str());
    }
}

void require_point(const DomainPoint& p) {
    if (!(p.y > 0.0)) throw ConfigError("lattice shape requires y > 0");
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ConfigError("non-finite lattice shape");
}

// Largest truncation half-width a single evaluation may request; beyond this
// the O(N^2) summation is no longer a sensible way to certify the tolerance.
constexpr int kMaxBoxN = 32768;

// Smallest N >= 1 with coeff * N^(2-s) / (s-2) <= eps.
int select_N(double coeff, double s, double eps, const char* what) {
    const double target = coeff / ((s - 2.0) * eps);
    int N = 1;
    if (target > 1.0) {
        const double n0 = std::pow(target, 1.0 / (s - 2.0));
        if (!(n0 < static_cast<double>(kMaxBoxN))) {
            std::ostringstream os;
            os << what << ": tolerance " << eps << " needs truncation N ~ " << n0
               << " (> " << kMaxBoxN << "); unreachable within the summation budget";
            throw ToleranceError(os.str());
        }
        N = static_cast<int>(n0);
    }
    while (N > 1 && coeff * std::pow(static_cast<double>(N - 1), 2.0 - s) / (s - 2.0) <= eps) --N;
    while (coeff * std::pow(static_cast<double>(N), 2.0 - s) / (s - 2.0) > eps) {
        if (++N > kMaxBoxN) {
            std::ostringstream os;
            os << what << ": tolerance " << eps << " unreachable within the summation budget";
            throw ToleranceError(os.str());
        }
    }
    return N;
}

}  // namespace

namespace detail {

// Canonical shell order shared by every lattice kernel: shells of increasing
// k = max(|m|, |n|); within a shell the rows n = -k and n = +k (m from -k to
// k), then the columns m = -k and m = +k (n from -k+1 to k-1).  Each shell is
// accumulated locally and added to the running totals once, so any
// parallelization across *points* reproduces the serial result bit for bit.
template <class PerTerm>
void shell_sum(double x, double y, int N, PerTerm&& f) {
    const double invy = 1.0 / y;
    for (int k = 1; k <= N; ++k) {
        const double dk = static_cast<double>(k);
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            const double xn = x * n;
            const double yn2 = y * n * n;
            for (int m = -k; m <= k; ++m) {
                const double w = static_cast<double>(m) + xn;
                f(w, n, w * w * invy + yn2);
            }
        }
        for (int sm = 0; sm < 2; ++sm) {
            const double m = sm == 0 ? -dk : dk;
            for (int n = -k + 1; n <= k - 1; ++n) {
                const double nd = static_cast<double>(n);
                const double w = m + x * nd;
                f(w, nd, w * w * invy + y * nd * nd);
            }
        }
    }
}

double partial_sum(double x, double y, double s, int N) {
    const HalfPow hp(s);
    double total = 0.0;
    const double invy = 1.0 / y;
    for (int k = 1; k <= N; ++k) {
        double shell = 0.0;
        const double dk = static_cast<double>(k);
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            const double xn = x * n;
            const double yn2 = y * n * n;
            for (int m = -k; m <= k; ++m) {
                const double w = static_cast<double>(m) + xn;
                const double q = w * w * invy + yn2;
                shell += hp(q, 1.0 / q);
            }
        }
        for (int sm = 0; sm < 2; ++sm) {
            const double m = sm == 0 ? -dk : dk;
            for (int n = -k + 1; n <= k - 1; ++n) {
                const double nd = static_cast<double>(n);
                const double w = m + x * nd;
                const double q = w * w * invy + y * nd * nd;
                shell += hp(q, 1.0 / q);
            }
        }
        total += shell;
    }
    return total;
}

}  // namespace detail

double epstein_partial(const DomainPoint& p, double s, TruncationSpec t) {
    require_convergent(s);
    require_point(p);
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    return detail::partial_sum(p.x, p.y, s, t.N);
}

double epstein_tail_bound(double y, double s, TruncationSpec t) {
    require_convergent(s);
    if (!(y > 0.0)) throw ConfigError("tail bound requires y > 0");
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    return std::pow(2.0 * y, 0.5 * s) * 8.0 * std::pow(static_cast<double>(t.N), 2.0 - s) /
           (s - 2.0);
}

double epstein_tail_bound_general(const DomainPoint& p, double s, TruncationSpec t) {
    require_convergent(s);
    require_point(p);
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    const double lam = gram_least_eigenvalue(p.x, p.y);
    return std::pow(p.y / lam, 0.5 * s) * 8.0 * std::pow(static_cast<double>(t.N), 2.0 - s) /
           (s - 2.0);
}

double summation_radius(double mid, double tail, std::uint64_t terms) {
    // Documented radius model: truncation bound plus an explicit worst-case
    // summation-rounding term, inflated by the (1 + 1e-12 * T) slop factor.
    const double arith = std::fabs(mid) * DBL_EPSILON * static_cast<double>(terms);
    return (tail + arith) * (1.0 + 1e-12 * static_cast<double>(terms));
}

namespace {

CertifiedValue certify_sum(double mid, double tail, std::uint64_t terms, double tol,
                           const char* what) {
    const double rad = summation_radius(mid, tail, terms);
    if (!(rad <= tol)) {
        std::ostringstream os;
        os << what << ": certified radius " << rad << " exceeds requested tolerance " << tol
           << " at double precision";
        throw ToleranceError(os.str());
    }
    return {mid, rad};
}

}  // namespace

TruncationSpec select_truncation(const DomainPoint& p, double s, double tol) {
    require_convergent(s);
    require_point(p);
    if (!(tol > 0.0)) throw ConfigError("select_truncation: tolerance must be positive");
    // The general eigenvalue form of the tail coefficient is valid for every
    // y > 0 and coincides with the (2y)^{s/2} sandwich bound when the least
    // Gram eigenvalue is 1/2 (it is tighter wherever that eigenvalue is
    // larger, e.g. high cells, and remains sound below the unit circle where
    // the sandwich constant does not apply).
    const double lam = gram_least_eigenvalue(p.x, p.y);
    const double coeff = std::pow(p.y / lam, 0.5 * s) * 8.0;
    return {select_N(coeff, s, 0.5 * tol, "select_truncation")};
}

CertifiedValue epstein_certified(const DomainPoint& p, double s, double tol) {
    const TruncationSpec t = select_truncation(p, s, tol);
    const double mid = detail::partial_sum(p.x, p.y, s, t.N);
    const double tail = epstein_tail_bound_general(p, s, t);
    return certify_sum(mid, tail, term_count(t), tol, "epstein_certified");
}

CertifiedValue riemann_certified(double s, double tol) {
    if (!(s > 1.0)) throw ConfigError("riemann_certified: requires s > 1");
    if (!(tol > 0.0)) throw ConfigError("riemann_certified: tolerance must be positive");
    const double eps = 0.5 * tol;
    // Tail bound: zeta(s) - sum_{m<=N} m^-s <= s/(s-1) * N^(1-s).
    const double target = s / ((s - 1.0) * eps);
    double n0 = std::pow(target, 1.0 / (s - 1.0));
    if (!(n0 < 2.0e9)) {
        throw ToleranceError("riemann_certified: tolerance unreachable within the summation budget");
    }
    std::int64_t N = std::max<std::int64_t>(1, static_cast<std::int64_t>(n0));
    auto tail = [&](std::int64_t n) {
        return s / (s - 1.0) * std::pow(static_cast<double>(n), 1.0 - s);
    };
    while (N > 1 && tail(N - 1) <= eps) --N;
    while (tail(N) > eps) ++N;
    // Ascending term size (m = N down to 1) keeps the summation error small.
    double mid = 0.0;
    for (std::int64_t m = N; m >= 1; --m) mid += std::pow(static_cast<double>(m), -s);
    return certify_sum(mid, tail(N), static_cast<std::uint64_t>(N), tol, "riemann_certified");
}

double Gradient2::norm() const { return std::hypot(dx, dy); }

Gradient2 epstein_gradient(const DomainPoint& p, double s, TruncationSpec t) {
    require_convergent(s);
    require_point(p);
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    const detail::HalfPow hp(s);
    const double y = p.y;
    // Raw sums: Sx = sum' n*w*Q^{-s/2-1}, Sy = sum' (w^2 - y^2 n^2)*Q^{-s/2-1}
    // (in the y-scaled variable Q = T/y); prefactors applied at the end:
    //   d/dx = -(s/y) * Sx,   d/dy = s/(2 y^2) * Sy.
    double sx_total = 0.0, sy_total = 0.0;
    const double invy = 1.0 / y;
    for (int k = 1; k <= t.N; ++k) {
        double shell_x = 0.0;
        double shell_y = 0.0;
        const double dk = static_cast<double>(k);
        auto add = [&](double w, double n, double q) {
            const double qinv = 1.0 / q;
            const double pq = hp(q, qinv) * qinv;
            shell_x += n * w * pq;
            shell_y += (w * w - y * y * n * n) * pq;
        };
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            const double xn = p.x * n;
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
                const double w = m + p.x * nd;
                add(w, nd, w * w * invy + y * nd * nd);
            }
        }
        sx_total += shell_x;
        sy_total += shell_y;
    }
    return {-(s / y) * sx_total, s / (2.0 * y * y) * sy_total};
}

double epstein_gradient_tail_bound(double y, double s, TruncationSpec t) {
    require_convergent(s);
    if (!(y > 0.0)) throw ConfigError("tail bound requires y > 0");
    return std::pow(2.0 * y, 0.5 * s + 1.0) * s * 16.0 *
           std::pow(static_cast<double>(t.N), 2.0 - s) / (s - 2.0);
}

double log_weighted_sum(const DomainPoint& p, double s, TruncationSpec t) {
    require_convergent(s);
    require_point(p);
    if (t.N < 1) throw ConfigError("truncation requires N >= 1");
    const detail::HalfPow hp(s);
    double total = 0.0;
    const double invy = 1.0 / p.y;
    const double y = p.y;
    for (int k = 1; k <= t.N; ++k) {
        double shell = 0.0;
        const double dk = static_cast<double>(k);
        auto add = [&](double q) {
            // |p|^2 = Q, so (s log|p| + 1)/|p|^s = ((s/2) log Q + 1) Q^{-s/2}.
            shell += (0.5 * s * std::log(q) + 1.0) * hp(q, 1.0 / q);
        };
        for (int sn = 0; sn < 2; ++sn) {
            const double n = sn == 0 ? -dk : dk;
            const double xn = p.x * n;
            const double yn2 = y * n * n;
            for (int m = -k; m <= k; ++m) {
                const double w = static_cast<double>(m) + xn;
                add(w * w * invy + yn2);
            }
        }
        for (int sm = 0; sm < 2; ++sm) {
            const double m = sm == 0 ? -dk : dk;
            for (int n = -k + 1; n <= k - 1; ++n) {
                const double nd = static_cast<double>(n);
                const double w = m + p.x * nd;
                add(w * w * invy + y * nd * nd);
            }
        }
        total -= shell;
    }
    return total;
}

CertifiedValue triangular_zeta_cached(double s, double tol) {
    struct Key {
        std::uint64_t s_bits, tol_bits;
        bool operator<(const Key& o) const {
            return s_bits != o.s_bits ? s_bits < o.s_bits : tol_bits < o.tol_bits;
        }
    };
    static std::map<Key, CertifiedValue> cache;
    static std::mutex mu;

    std::uint64_t sb, tb;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&sb, &s, sizeof sb);
    std::memcpy(&tb, &tol, sizeof tb);
    const Key key{sb, tb};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const CertifiedValue v = epstein_certified(triangular_point(), s, tol);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, v).first->second;
}

}  // namespace latcert
