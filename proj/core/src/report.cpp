#include "latcert/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace latcert {

const std::vector<ReferenceRow>& reference_table() {
    static const std::vector<ReferenceRow> rows = {
        {12.0, 6.0, "7.52", 181.0}, {14.0, 6.0, "5.23", 95.0}, {16.0, 6.0, "4.18", 72.0},
        {18.0, 6.0, "3.60", 50.0},  {20.0, 6.0, "3.22", 39.0}, {22.0, 6.0, "2.97", 34.0},
        {24.0, 6.0, "2.77", 33.0},
    };
    return rows;
}

std::optional<ReferenceRow> reference_row(double alpha, double beta) {
    for (const auto& r : reference_table()) {
        if (r.alpha == alpha && r.beta == beta) return r;
    }
    return std::nullopt;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

using json = nlohmann::ordered_json;

json to_json(const CertifiedValue& v) {
    return json{{"mid", v.mid}, {"rad", v.rad}, {"lo", v.lo()}, {"hi", v.hi()}};
}

json to_json(const ThresholdResult& t) {
    json etas;
    etas["eta1"] = to_json(t.etas.eta1);
    etas["eta2"] = to_json(t.etas.eta2);
    etas["eta3"] = to_json(t.etas.eta3);
    return json{
        {"y_exact", t.y_exact},
        {"y_lo", t.y_lo},
        {"y_bar", t.y_bar},
        {"y_bar_string", t.y_bar_string()},
        {"k", t.k},
        {"branch",
         t.branch == ThresholdResult::Branch::quadratic ? "alpha-equals-2beta" : "general"},
        {"etas", etas},
    };
}

json to_json(const GridSpec& g) {
    return json{{"delta", g.delta},
                {"y1", g.y1},
                {"y_top", g.y_top},
                {"x_count", g.I()},
                {"y_count", g.J()}};
}

namespace {

const char* status_name(CellStatus s) {
    switch (s) {
        case CellStatus::certified:
            return "certified";
        case CellStatus::subdivided:
            return "subdivided";
        case CellStatus::fallback:
            return "near-A2-fallback";
        case CellStatus::failed:
            return "failed";
    }
    return "unknown";
}

json to_json(const FallbackCheck& f) {
    return json{{"samples", f.samples},
                {"min_Q", f.min_Q},
                {"max_Q", f.max_Q},
                {"passed", f.passed},
                {"label", f.label}};
}

json to_json(const CellVerdict& v) {
    return json{{"x_lo", v.cell.x_lo}, {"x_hi", v.cell.x_hi},   {"y_lo", v.cell.y_lo},
                {"y_hi", v.cell.y_hi}, {"depth", v.depth},      {"Q_mid", v.Q.mid},
                {"Q_rad", v.Q.rad},    {"lipschitz", v.lipschitz}, {"margin", v.margin},
                {"status", status_name(v.status)}};
}

}  // namespace

json to_json(const CertificationReport& r) {
    const bool paper = r.mode == CertificationReport::Mode::paper;
    json j;
    j["exponents"] = json{{"alpha", r.exponents.alpha}, {"beta", r.exponents.beta}};
    j["mode"] = paper ? "paper" : "adaptive";
    j["threshold"] = to_json(r.threshold);
    j["grid"] = to_json(r.grid);
    j["margin_required"] = r.margin_required;
    if (paper) {
        j["M"] = r.M;
        j["margin_term"] = r.margin_term;
        j["grid_points"] = r.grid_points;
        j["refused_points"] = r.refused_points;
    } else {
        j["cells"] = json{{"certified", r.certified_cells},
                          {"subdivided", r.subdivided_cells},
                          {"fallback", r.fallback_cells},
                          {"failed", r.failed_cells}};
        j["max_depth_used"] = r.max_depth_used;
        j["max_local_lipschitz"] = r.max_local_lipschitz;
    }
    j["min_Q"] = to_json(r.min_Q);
    j["min_Q_summary"] = format_short(r.min_Q.mid);
    j["argmin"] = json{{"x", r.argmin_x}, {"y", r.argmin_y}};
    j["fallback_check"] = to_json(r.fallback_check);
    j["verdict"] = r.verdict;
    j["zeta_terms"] = r.stats.zeta_terms;
    if (!r.cells.empty()) {
        json cells = json::array();
        for (const auto& v : r.cells) cells.push_back(to_json(v));
        j["cell_list"] = std::move(cells);
    }
    return j;
}

json make_envelope(const std::string& command, const json& config, const json& result,
                   const json& paper_comparison, double wall_ms, int workers) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["result"] = result;
    j["paper_comparison"] = paper_comparison;

    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["timing"] = json{{"timestamp", stamp},
                       {"wall_ms", wall_ms},
                       {"workers", workers},
                       {"library_version", kLibraryVersion}};
    return j;
}

json paper_comparison_for(const CertificationReport& r) {
    json j = json::object();
    const auto ref = reference_row(r.exponents.alpha, r.exponents.beta);
    if (!ref) return j;
    const std::string computed = r.threshold.y_bar_string();
    j["y_bar_printed"] = ref->y_bar;
    j["y_bar_computed"] = computed;
    j["y_bar_matches"] = computed == ref->y_bar;
    j["M_printed"] = ref->M;
    j["M_flag"] = "nonmatching-as-printed";
    return j;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::string out = "x,y,value\n";
    for (const auto& r : rows) {
        out += format_full(r.x);
        out += ',';
        out += format_full(r.y);
        out += ',';
        out += format_full(r.value);
        out += '\n';
    }
    return out;
}

std::string envelope_to_string(const nlohmann::ordered_json& envelope) {
    return envelope.dump(2) + "\n";
}

}  // namespace latcert
