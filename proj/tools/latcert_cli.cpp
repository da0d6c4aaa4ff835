// latcert command line: certified minimality checks and diagnostics for
// planar lattice energies.  Subcommands: certify, table1, zeta, energy,
// optimal-volume, scan.
//
// Exit codes: 0 success (certify: verdict true), 1 certify verdict false,
// 2 configuration error, 3 computation error (tolerance not reachable, ...).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latcert/certify.hpp"
#include "latcert/energy.hpp"
#include "latcert/errors.hpp"
#include "latcert/grid.hpp"
#include "latcert/lattice.hpp"
#include "latcert/parallel.hpp"
#include "latcert/report.hpp"
#include "latcert/zeta.hpp"

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw latcert::ConfigError("cannot open output file: " + path);
    f << text;
}

// ---------------------------------------------------------------- certify --

struct CertifyOpts {
    double alpha = 12.0;
    double beta = 6.0;
    std::string mode = "adaptive";
    double delta = 0.01;
    int n = 40;                 // paper-mode truncation
    double m = std::nan("");    // paper-mode global constant; default: reference table
    double tol = 1e-8;
    int k = 2;
    double epsilon = 0.01;
    int max_depth = 8;
    double margin = 0.0;
    int workers = 0;
    int fallback_samples = 10000;
    bool keep_cells = false;
    std::string output;
    std::string format = "json";
};

int run_certify(const CertifyOpts& o) {
    if (o.format != "json") throw latcert::ConfigError("certify reports are JSON only");
    const latcert::ExponentPair e{o.alpha, o.beta};
    e.validate();

    const auto t0 = Clock::now();
    latcert::CertificationReport rep;
    json config;
    config["alpha"] = o.alpha;
    config["beta"] = o.beta;
    config["mode"] = o.mode;
    config["delta"] = o.delta;

    if (o.mode == "paper") {
        double M = o.m;
        if (std::isnan(M)) {
            const auto ref = latcert::reference_row(o.alpha, o.beta);
            if (!ref) {
                throw latcert::ConfigError(
                    "paper mode needs --m (no embedded reference constant for this exponent pair)");
            }
            M = ref->M;
        }
        if (!(M > 0.0) || !std::isfinite(M)) throw latcert::ConfigError("--m must be positive");
        config["n"] = o.n;
        config["m"] = M;
        config["k"] = o.k;
        const auto threshold = latcert::threshold_y(e, 1e-6, o.k);
        const auto grid = latcert::build_grid(threshold, o.delta);
        rep = latcert::sweep_paper_mode(e, grid, M, {o.n}, o.workers);
    } else if (o.mode == "adaptive") {
        latcert::AdaptiveConfig cfg;
        cfg.delta = o.delta;
        cfg.max_depth = o.max_depth;
        cfg.epsilon = o.epsilon;
        cfg.tol = o.tol;
        cfg.margin = o.margin;
        cfg.workers = o.workers;
        cfg.fallback_samples = o.fallback_samples;
        cfg.keep_cells = o.keep_cells;
        config["max_depth"] = o.max_depth;
        config["epsilon"] = o.epsilon;
        config["tol"] = o.tol;
        config["margin"] = o.margin;
        config["fallback_samples"] = o.fallback_samples;
        config["keep_cells"] = o.keep_cells;
        rep = latcert::certify_adaptive(e, cfg);
    } else {
        throw latcert::ConfigError("--mode must be 'paper' or 'adaptive'");
    }

    const json env = latcert::make_envelope("certify", config, latcert::to_json(rep),
                                            latcert::paper_comparison_for(rep),
                                            elapsed_ms(t0), rep.stats.workers);
    write_text(o.output, latcert::envelope_to_string(env));
    return rep.verdict ? 0 : 1;
}

// ----------------------------------------------------------------- table1 --

struct Table1Opts {
    int n = 40;
    double tol = 1e-6;
    int samples = 100;
    int workers = 0;
    std::string output;
    std::string format = "json";
};

// Deterministic sample of local Lipschitz bounds: `samples` cells of pitch
// 0.01 drawn uniformly from the sweep rectangle, kept at distance >= 0.02
// from the triangular point (closer cells belong to the fallback ball).
double sample_max_lipschitz(const latcert::ExponentPair& e, const latcert::ThresholdResult& th,
                            double tol, int samples, int workers) {
    const double pitch = 0.01;
    std::mt19937_64 rng(0x7ab1e5a3u);
    std::uniform_real_distribution<double> ux(0.0, 0.5 - pitch);
    std::uniform_real_distribution<double> uy(latcert::kTriangularY, th.y_bar - pitch);
    std::vector<latcert::Cell> cells;
    cells.reserve(static_cast<std::size_t>(samples));
    while (cells.size() < static_cast<std::size_t>(samples)) {
        latcert::Cell c;
        c.x_lo = ux(rng);
        c.y_lo = uy(rng);
        c.x_hi = c.x_lo + pitch;
        c.y_hi = c.y_lo + pitch;
        if (c.distance_to(latcert::kTriangularX, latcert::kTriangularY) < 0.02) continue;
        cells.push_back(c);
    }
    std::vector<double> bounds(cells.size(), 0.0);
    latcert::parallel_for(cells.size(), latcert::resolve_workers(workers),
                          [&](std::size_t i) { bounds[i] = local_lipschitz(cells[i], e, tol); });
    double best = 0.0;
    for (double b : bounds) best = std::max(best, b);
    return best;
}

int run_table1(const Table1Opts& o) {
    if (o.format != "json") throw latcert::ConfigError("table1 reports are JSON only");
    const auto t0 = Clock::now();
    // Rows in printed order, with the quadratic pair (12, 6) appended.
    const std::vector<std::pair<double, double>> pairs = {
        {14, 6}, {16, 6}, {18, 6}, {20, 6}, {22, 6}, {24, 6}, {12, 6}};
    json rows = json::array();
    for (const auto& [alpha, beta] : pairs) {
        const latcert::ExponentPair e{alpha, beta};
        const auto th = latcert::threshold_y(e, 1e-6, 2);
        const double m_literal = latcert::paper_lipschitz(e, th.y_bar, {o.n});
        const double max_l = sample_max_lipschitz(e, th, o.tol, o.samples, o.workers);
        json row;
        row["alpha"] = alpha;
        row["beta"] = beta;
        row["branch"] =
            th.branch == latcert::ThresholdResult::Branch::quadratic ? "alpha-equals-2beta" : "general";
        row["y_bar"] = th.y_bar;
        row["y_bar_string"] = th.y_bar_string();
        row["M_literal"] = m_literal;
        row["max_local_lipschitz_sample"] = max_l;
        if (const auto ref = latcert::reference_row(alpha, beta)) {
            row["y_bar_printed"] = ref->y_bar;
            row["y_bar_matches"] = th.y_bar_string() == ref->y_bar;
            row["M_printed"] = ref->M;
            row["M_flag"] = "nonmatching-as-printed";
        }
        rows.push_back(row);
    }
    json config;
    config["n"] = o.n;
    config["tol"] = o.tol;
    config["samples"] = o.samples;
    json result;
    result["rows"] = rows;
    const json env = latcert::make_envelope("table1", config, result, json::object(),
                                            elapsed_ms(t0), latcert::resolve_workers(o.workers));
    write_text(o.output, latcert::envelope_to_string(env));
    return 0;
}

// ------------------------------------------------------------------- zeta --

struct ZetaOpts {
    double x = 0.0;
    double y = 1.0;
    double s = 6.0;
    double tol = 1e-8;
    std::string output;
    std::string format = "json";
};

int run_zeta(const ZetaOpts& o) {
    if (o.format != "json") throw latcert::ConfigError("zeta reports are JSON only");
    const auto t0 = Clock::now();
    const latcert::DomainPoint p{o.x, o.y};
    const auto v = latcert::epstein_certified(p, o.s, o.tol);
    const auto t = latcert::select_truncation(p, o.s, o.tol);
    json config;
    config["x"] = o.x;
    config["y"] = o.y;
    config["s"] = o.s;
    config["tol"] = o.tol;
    json result;
    result["value"] = latcert::to_json(v);
    result["value_summary"] = latcert::format_short(v.mid);
    result["truncation_N"] = t.N;
    result["terms"] = latcert::term_count(t);
    const json env = latcert::make_envelope("zeta", config, result, json::object(),
                                            elapsed_ms(t0), 1);
    write_text(o.output, latcert::envelope_to_string(env));
    return 0;
}

// ------------------------------------------------------- energy primitives --

struct EnergyOpts {
    double x = 0.5;
    double y = latcert::kTriangularY;
    double volume = 1.0;
    double alpha = 12.0;
    double beta = 6.0;
    double a = 1.0;
    double b = 1.0;
    double tol = 1e-8;
    std::string output;
    std::string format = "json";
};

latcert::LJParams params_of(const EnergyOpts& o) {
    latcert::LJParams params;
    params.exponents = {o.alpha, o.beta};
    params.a = o.a;
    params.b = o.b;
    params.validate();
    return params;
}

json energy_config(const EnergyOpts& o, bool with_volume) {
    json config;
    config["x"] = o.x;
    config["y"] = o.y;
    if (with_volume) config["volume"] = o.volume;
    config["alpha"] = o.alpha;
    config["beta"] = o.beta;
    config["a"] = o.a;
    config["b"] = o.b;
    config["tol"] = o.tol;
    return config;
}

int run_energy(const EnergyOpts& o) {
    if (o.format != "json") throw latcert::ConfigError("energy reports are JSON only");
    const auto t0 = Clock::now();
    const latcert::DomainPoint p{o.x, o.y};
    const auto ev = latcert::lj_energy(p, o.volume, params_of(o), o.tol);
    json result;
    result["value"] = ev.value;
    result["value_summary"] = latcert::format_short(ev.value);
    result["repulsive_zeta"] = ev.parts.repulsive;
    result["attractive_zeta"] = ev.parts.attractive;
    const json env = latcert::make_envelope("energy", energy_config(o, true), result,
                                            json::object(), elapsed_ms(t0), 1);
    write_text(o.output, latcert::envelope_to_string(env));
    return 0;
}

int run_optimal_volume(const EnergyOpts& o) {
    if (o.format != "json") throw latcert::ConfigError("optimal-volume reports are JSON only");
    const auto t0 = Clock::now();
    const latcert::DomainPoint p{o.x, o.y};
    const auto params = params_of(o);
    const double v_star = latcert::optimal_volume(p, params, o.tol);
    const double e_min = latcert::min_dilated_energy(p, params, o.tol);
    const double e_at = latcert::lj_energy(p, v_star, params, o.tol).value;
    json result;
    result["volume"] = v_star;
    result["volume_summary"] = latcert::format_short(v_star);
    result["min_dilated_energy"] = e_min;
    result["energy_at_volume"] = e_at;
    result["global_volume_bound"] = latcert::global_volume_bound(params);
    const json env = latcert::make_envelope("optimal-volume", energy_config(o, false), result,
                                            json::object(), elapsed_ms(t0), 1);
    write_text(o.output, latcert::envelope_to_string(env));
    return 0;
}

// ------------------------------------------------------------------- scan --

struct ScanOpts {
    std::string functional = "Q";
    double alpha = 12.0;
    double beta = 6.0;
    double s = 4.0;
    double delta = 0.01;
    int n = 40;
    double y_top = std::nan("");  // Q: threshold default; F: 3.0
    int k = 2;
    int workers = 0;
    std::string output;
    std::string format = "csv";
};

// Matched-truncation quotient on a grid: both lattices truncated at the same
// box, so the (nearly equal) tails cancel in the differences.  Plot-quality
// values, not certified enclosures.
latcert::ScanResult quotient_scan(const latcert::ExponentPair& e, const latcert::GridSpec& grid,
                                  latcert::TruncationSpec t, int workers) {
    const double ta = latcert::epstein_partial(latcert::triangular_point(), e.alpha, t);
    const double tb = latcert::epstein_partial(latcert::triangular_point(), e.beta, t);
    latcert::ScanResult out;
    out.rows.resize(grid.size());
    const std::size_t J = grid.J();
    latcert::parallel_for(grid.size(), latcert::resolve_workers(workers), [&](std::size_t idx) {
        const latcert::DomainPoint p{grid.xs[idx / J], grid.ys[idx % J]};
        const double da = latcert::epstein_partial(p, e.alpha, t) - ta;
        const double db = latcert::epstein_partial(p, e.beta, t) - tb;
        out.rows[idx] = {p.x, p.y, da / db};
    });
    for (std::size_t idx = 0; idx < out.rows.size(); ++idx) {
        if (out.rows[idx].value < out.rows[out.argmin].value) out.argmin = idx;
    }
    return out;
}

int run_scan(const ScanOpts& o) {
    const auto t0 = Clock::now();
    latcert::ScanResult scan;
    json config;
    config["functional"] = o.functional;
    latcert::GridSpec grid;
    if (o.functional == "Q") {
        const latcert::ExponentPair e{o.alpha, o.beta};
        e.validate();
        double y_top = o.y_top;
        if (std::isnan(y_top)) y_top = latcert::threshold_y(e, 1e-6, o.k).y_bar;
        grid = latcert::build_grid_to(y_top, o.delta);
        config["alpha"] = o.alpha;
        config["beta"] = o.beta;
        config["delta"] = o.delta;
        config["y_top"] = y_top;
        config["n"] = o.n;
        scan = quotient_scan(e, grid, {o.n}, o.workers);
    } else if (o.functional == "F") {
        if (!(o.s > 2.0)) throw latcert::ConfigError("--s must be > 2");
        double y_top = o.y_top;
        if (std::isnan(y_top)) y_top = 3.0;
        grid = latcert::build_grid_to(y_top, o.delta);
        config["s"] = o.s;
        config["delta"] = o.delta;
        config["y_top"] = y_top;
        config["n"] = o.n;
        scan = latcert::conjecture_scan(o.s, grid, {o.n}, o.workers);
    } else {
        throw latcert::ConfigError("--functional must be 'Q' or 'F'");
    }

    if (o.format == "csv") {
        write_text(o.output, latcert::scan_csv(scan.rows));
    } else if (o.format == "json") {
        json result;
        result["grid"] = latcert::to_json(grid);
        const auto& am = scan.rows[scan.argmin];
        result["argmin"] = {{"x", am.x}, {"y", am.y}, {"value", am.value}};
        json rows = json::array();
        for (const auto& r : scan.rows) rows.push_back({r.x, r.y, r.value});
        result["rows"] = rows;
        const json env = latcert::make_envelope("scan", config, result, json::object(),
                                                elapsed_ms(t0), latcert::resolve_workers(o.workers));
        write_text(o.output, latcert::envelope_to_string(env));
    } else {
        throw latcert::ConfigError("--format must be 'csv' or 'json'");
    }
    return 0;
}

void add_output_options(CLI::App* cmd, std::string& output, std::string& format,
                        const std::string& formats) {
    cmd->add_option("--output", output, "Write the report to a file instead of stdout");
    cmd->add_option("--format", format, "Output format: " + formats);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified minimality checks for planar lattice energies"};
    app.require_subcommand(1);

    CertifyOpts co;
    auto* certify = app.add_subcommand(
        "certify", "Certify the zeta-quotient lower bound away from the triangular lattice");
    certify->add_option("--alpha", co.alpha, "Repulsive exponent (> beta)")->required();
    certify->add_option("--beta", co.beta, "Attractive exponent (> 2)")->required();
    certify->add_option("--mode", co.mode, "Sweep mode: adaptive (default) or paper");
    certify->add_option("--delta", co.delta, "Grid pitch (paper) / depth-0 cell pitch (adaptive)");
    certify->add_option("--n", co.n, "Paper mode: truncation box half-width");
    certify->add_option("--m", co.m, "Paper mode: global Lipschitz constant (default: embedded table)");
    certify->add_option("--tol", co.tol, "Adaptive mode: absolute tolerance per zeta evaluation");
    certify->add_option("--k", co.k, "Paper mode: threshold rounding decimals");
    certify->add_option("--epsilon", co.epsilon, "Adaptive mode: fallback ball radius");
    certify->add_option("--max-depth", co.max_depth, "Adaptive mode: subdivision depth limit");
    certify->add_option("--margin", co.margin, "Required margin (default alpha/beta)");
    certify->add_option("--workers", co.workers, "Worker threads (0: LATCERT_WORKERS or hardware)");
    certify->add_option("--fallback-samples", co.fallback_samples,
                        "Adaptive mode: sampled points in the fallback ball");
    certify->add_flag("--keep-cells", co.keep_cells, "Keep every analyzed cell in the report");
    add_output_options(certify, co.output, co.format, "json");

    Table1Opts to;
    auto* table1 = app.add_subcommand(
        "table1", "Thresholds, literal global constants and sampled local bounds per exponent pair");
    table1->add_option("--n", to.n, "Truncation box half-width for the literal constant");
    table1->add_option("--tol", to.tol, "Zeta tolerance for sampled local bounds");
    table1->add_option("--samples", to.samples, "Sampled cells per exponent pair");
    table1->add_option("--workers", to.workers, "Worker threads");
    add_output_options(table1, to.output, to.format, "json");

    ZetaOpts zo;
    auto* zeta = app.add_subcommand("zeta", "Certified Epstein zeta value of one lattice");
    zeta->add_option("--x", zo.x, "Domain coordinate x");
    zeta->add_option("--y", zo.y, "Domain coordinate y (> 0)")->required();
    zeta->add_option("--s", zo.s, "Exponent s (> 2)")->required();
    zeta->add_option("--tol", zo.tol, "Absolute tolerance");
    add_output_options(zeta, zo.output, zo.format, "json");

    EnergyOpts eo;
    auto* energy = app.add_subcommand("energy", "Lennard-Jones-type lattice energy at one volume");
    energy->add_option("--x", eo.x, "Domain coordinate x");
    energy->add_option("--y", eo.y, "Domain coordinate y (> 0)");
    energy->add_option("--volume", eo.volume, "Covolume V of the dilated lattice")->required();
    energy->add_option("--alpha", eo.alpha, "Repulsive exponent");
    energy->add_option("--beta", eo.beta, "Attractive exponent");
    energy->add_option("--a", eo.a, "Repulsive coefficient");
    energy->add_option("--b", eo.b, "Attractive coefficient");
    energy->add_option("--tol", eo.tol, "Zeta tolerance");
    add_output_options(energy, eo.output, eo.format, "json");

    EnergyOpts vo;
    auto* optvol = app.add_subcommand("optimal-volume",
                                      "Energy-minimizing volume and minimal dilated energy");
    optvol->add_option("--x", vo.x, "Domain coordinate x");
    optvol->add_option("--y", vo.y, "Domain coordinate y (> 0)");
    optvol->add_option("--alpha", vo.alpha, "Repulsive exponent");
    optvol->add_option("--beta", vo.beta, "Attractive exponent");
    optvol->add_option("--a", vo.a, "Repulsive coefficient");
    optvol->add_option("--b", vo.b, "Attractive coefficient");
    optvol->add_option("--tol", vo.tol, "Zeta tolerance");
    add_output_options(optvol, vo.output, vo.format, "json");

    ScanOpts so;
    auto* scan = app.add_subcommand("scan", "Grid scan of the quotient Q or log-weighted sum F");
    scan->add_option("--functional", so.functional, "Q (zeta quotient) or F (log-weighted sum)");
    scan->add_option("--alpha", so.alpha, "Q: repulsive exponent");
    scan->add_option("--beta", so.beta, "Q: attractive exponent");
    scan->add_option("--s", so.s, "F: exponent (> 2)");
    scan->add_option("--delta", so.delta, "Grid pitch (decimal fraction dividing 1/2)");
    scan->add_option("--n", so.n, "Truncation box half-width");
    scan->add_option("--y-top", so.y_top, "Top of the scanned rectangle (Q default: threshold)");
    scan->add_option("--k", so.k, "Q: threshold rounding decimals");
    scan->add_option("--workers", so.workers, "Worker threads");
    add_output_options(scan, so.output, so.format, "csv (default) or json");

    int exit_code = 0;
    certify->callback([&] { exit_code = run_certify(co); });
    table1->callback([&] { exit_code = run_table1(to); });
    zeta->callback([&] { exit_code = run_zeta(zo); });
    energy->callback([&] { exit_code = run_energy(eo); });
    optvol->callback([&] { exit_code = run_optimal_volume(vo); });
    scan->callback([&] { exit_code = run_scan(so); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const latcert::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
