#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latcert/certify.hpp"

namespace latcert {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kWorkersEnvVar = "LATCERT_WORKERS";

// Reference values printed in the source tables, embedded only to flag
// matches/mismatches in reports -- never used as computation inputs.
struct ReferenceRow {
    double alpha;
    double beta;
    const char* y_bar;  // exact printed string at two decimals
    double M;
};

const std::vector<ReferenceRow>& reference_table();
std::optional<ReferenceRow> reference_row(double alpha, double beta);

// Round-trip-safe decimal rendering (17 significant digits).
std::string format_full(double v);
// Human-readable 6-digit summary.
std::string format_short(double v);

// JSON number fields are emitted as exact 17-digit strings where round-trip
// fidelity matters; nlohmann's double output is already shortest-round-trip,
// so plain doubles are used for everything else.
nlohmann::ordered_json to_json(const CertifiedValue& v);
nlohmann::ordered_json to_json(const ThresholdResult& t);
nlohmann::ordered_json to_json(const GridSpec& g);
nlohmann::ordered_json to_json(const CertificationReport& r);

// Assembles the report envelope.  Top-level keys, in order: schema_version,
// command, config, result, paper_comparison, timing.  Everything that varies
// between identical runs (timestamp, wall-clock, worker count, library
// version) lives under `timing`, so two reports from the same config are
// byte-identical after deleting that one key.
nlohmann::ordered_json make_envelope(const std::string& command,
                                     const nlohmann::ordered_json& config,
                                     const nlohmann::ordered_json& result,
                                     const nlohmann::ordered_json& paper_comparison,
                                     double wall_ms, int workers);

// Comparison block against the embedded reference rows (empty object when the
// exponent pair is not tabulated).
nlohmann::ordered_json paper_comparison_for(const CertificationReport& r);

// CSV emission: header "x,y,value", LF line endings, '.' decimal separator,
// 17-significant-digit values.
std::string scan_csv(const std::vector<ScanRow>& rows);

// Serializes an envelope with a trailing newline (stable two-space indent).
std::string envelope_to_string(const nlohmann::ordered_json& envelope);

}  // namespace latcert
