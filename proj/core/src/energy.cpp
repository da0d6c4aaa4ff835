#include "latcert/energy.hpp"

#include <cmath>

#include "latcert/errors.hpp"
#include "latcert/grid.hpp"
#include "latcert/parallel.hpp"

namespace latcert {

void ExponentPair::validate() const {
    if (!(beta > 2.0)) {
        throw ConfigError("beta must exceed 2 (lattice sums diverge otherwise)");
    }
    if (!(alpha > beta)) {
        throw ConfigError("alpha must exceed beta");
    }
}

void LJParams::validate() const {
    exponents.validate();
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ConfigError("potential coefficients a and b must be positive");
    }
}

EnergyValue lj_energy(const DomainPoint& p, double V, const LJParams& params, double tol) {
    params.validate();
    if (!(V > 0.0)) throw ConfigError("covolume must be positive");
    const double alpha = params.exponents.alpha;
    const double beta = params.exponents.beta;
    const double za = epstein_certified(p, alpha, tol).mid;
    const double zb = epstein_certified(p, beta, tol).mid;
    EnergyValue e;
    e.parts.repulsive = za;
    e.parts.attractive = zb;
    e.value = params.a * std::pow(V, -0.5 * alpha) * za -
              params.b * std::pow(V, -0.5 * beta) * zb;
    return e;
}

double optimal_volume(const DomainPoint& p, const LJParams& params, double tol) {
    params.validate();
    const double alpha = params.exponents.alpha;
    const double beta = params.exponents.beta;
    const double za = epstein_certified(p, alpha, tol).mid;
    const double zb = epstein_certified(p, beta, tol).mid;
    return std::pow(params.a * alpha * za / (params.b * beta * zb), 2.0 / (alpha - beta));
}

double min_dilated_energy(const DomainPoint& p, const LJParams& params, double tol) {
    params.validate();
    const double alpha = params.exponents.alpha;
    const double beta = params.exponents.beta;
    const double za = epstein_certified(p, alpha, tol).mid;
    const double zb = epstein_certified(p, beta, tol).mid;
    const double r = 1.0 / (alpha - beta);
    return std::pow(params.b, alpha * r) * std::pow(zb, alpha * r) /
           (std::pow(params.a, beta * r) * std::pow(za, beta * r)) *
           std::pow(beta / alpha, beta * r) * (beta / alpha - 1.0);
}

double global_volume_bound(const LJParams& params) {
    params.validate();
    const double alpha = params.exponents.alpha;
    const double beta = params.exponents.beta;
    return std::pow(params.a * alpha / (params.b * beta), 2.0 / (alpha - beta));
}

CertifiedValue quotient_Q(const DomainPoint& p, const ExponentPair& e, double tol) {
    e.validate();
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    const double budget = 0.25 * tol;
    const CertifiedValue za = epstein_certified(p, e.alpha, budget);
    const CertifiedValue zb = epstein_certified(p, e.beta, budget);
    const CertifiedValue ta = triangular_zeta_cached(e.alpha, budget);
    const CertifiedValue tb = triangular_zeta_cached(e.beta, budget);

    const Interval da = Interval::from_certified(za) - Interval::from_certified(ta);
    const Interval db = Interval::from_certified(zb) - Interval::from_certified(tb);
    if (db.contains_zero()) {
        throw NearTriangularError(
            "quotient denominator enclosure contains zero: the lattice is too close to "
            "triangular for this tolerance");
    }
    return div(da, db).to_certified();
}

ScanResult conjecture_scan(double s, const GridSpec& grid, TruncationSpec t, int workers) {
    if (!(s > 2.0)) throw ConfigError("scan exponent must exceed 2");
    if (grid.size() == 0) throw ConfigError("scan grid is empty");

    ScanResult result;
    result.rows.resize(grid.size());
    const std::size_t J = grid.J();
    parallel_for(grid.size(), workers, [&](std::size_t idx) {
        const std::size_t i = idx / J;
        const std::size_t j = idx % J;
        const DomainPoint p{grid.xs[i], grid.ys[j]};
        result.rows[idx] = {p.x, p.y, log_weighted_sum(p, s, t)};
    });

    result.argmin = 0;
    for (std::size_t k = 1; k < result.rows.size(); ++k) {
        if (result.rows[k].value < result.rows[result.argmin].value) result.argmin = k;
    }
    return result;
}

}  // namespace latcert
