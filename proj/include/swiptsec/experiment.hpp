#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swiptsec/secrecy.hpp"

// Experiment orchestration: parameter sweeps, the secrecy-energy
// region, and the cross-engine validation report, plus deterministic
// CSV/JSON serialization of each.

namespace swiptsec::expcli {

enum class SweepParameter {
    MainSnrDb,
    EveSnrDb,
    NEves,
    DeltaS,
    DeltaE,
    RhoS,
    KFactor,
    MShape,
};

enum class EngineSelect { Quadrature, ClosedForm, MonteCarlo };

const char* sweep_parameter_name(SweepParameter p);
const char* engine_select_name(EngineSelect e);

struct SweepConfig {
    linkmodel::Scenario scenario;
    SweepParameter parameter = SweepParameter::MainSnrDb;
    std::vector<double> values;        // non-empty, strictly monotone
    std::vector<EngineSelect> engines; // non-empty, evaluated in order
    std::size_t trials = 100000;
    std::uint64_t seed = 12345;
    secrecy::BetaInterpretation beta_interpretation =
        secrecy::BetaInterpretation::ComplementPair;
    double quad_rel_tol = 1e-7;
};

struct RegionConfig {
    linkmodel::Scenario scenario;
    std::vector<double> rho_grid;  // strictly increasing, within (0,1)
    double zeta = 0.9;
    EngineSelect engine = EngineSelect::Quadrature;
    std::size_t trials = 100000;
    std::uint64_t seed = 12345;
    secrecy::BetaInterpretation beta_interpretation =
        secrecy::BetaInterpretation::ComplementPair;
    double quad_rel_tol = 1e-7;
};

// One evaluated (sweep value, engine) cell. status is "ok", "flagged"
// (engine returned a diagnostic-tagged value), or "skipped" (engine
// not applicable to the scenario; reason carries a stable code).
struct SweepRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string engine;
    double capacity_bits = 0.0;
    double uncertainty = 0.0;
    std::string status = "ok";
    std::string reason;
};

struct RegionPoint {
    double energy_linear = 0.0;
    double capacity_bits = 0.0;
    double rho = 0.0;
};

struct ValidationRow {
    std::string engine;   // "quadrature", "montecarlo", "closedform"
    std::string variant;  // e.g. "complement_pair", "as_printed", ""
    double value = 0.0;
    double uncertainty = 0.0;
    std::string status = "ok";      // "ok" or "flagged"
    std::string note;               // flag code when flagged
    double delta_vs_quadrature = 0.0;  // NaN when not comparable
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    double quadrature_value = 0.0;
    double quadrature_error = 0.0;
    double montecarlo_value = 0.0;
    double montecarlo_stderr = 0.0;
    double concordance_delta = 0.0;   // |quadrature - montecarlo|
    double concordance_budget = 0.0;  // 4 * (stderr + quadrature error)
    bool concordance_ok = false;
    // Marcum fit quality (Rician scenarios): fitted mu/nu and
    // max_abs_error per link, as formatted key/value lines.
    std::vector<std::pair<std::string, std::string>> fit_quality;
};

// Evaluate every (value, engine) cell in config order. Rows for
// engine/scenario mismatches are marked skipped and the run continues.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// One point per rho: both links' splitting factor set to rho, energy
// from the main link's harvest at 1-rho, capacity at rho.
std::vector<RegionPoint> run_region(const RegionConfig& config);

// Single-scenario evaluation: one row per engine, in order, with
// sweep_param "none" and sweep_value 0.
std::vector<SweepRow> run_eval(const linkmodel::Scenario& scenario,
                               const std::vector<EngineSelect>& engines,
                               std::size_t trials, std::uint64_t seed,
                               secrecy::BetaInterpretation beta_interpretation =
                                   secrecy::BetaInterpretation::ComplementPair,
                               double quad_rel_tol = 1e-7);

// Cross-engine validation at one scenario.
ValidationReport run_validate(const linkmodel::Scenario& scenario,
                              std::size_t trials, std::uint64_t seed,
                              secrecy::BetaInterpretation beta_interpretation =
                                  secrecy::BetaInterpretation::ComplementPair,
                              double quad_rel_tol = 1e-7);

// Serialization. CSV: UTF-8, LF line endings, '.' decimal separator,
// doubles as shortest round-trip strings. JSON: array of row objects
// with the same field names (non-finite numbers become null).
std::string write_sweep_csv(const std::vector<SweepRow>& rows);
std::string write_sweep_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_json(const std::string& text);
std::string write_region_csv(const std::vector<RegionPoint>& points);
std::string write_region_json(const std::vector<RegionPoint>& points);
std::vector<RegionPoint> read_region_json(const std::string& text);
std::string write_validate_text(const ValidationReport& report);
std::string write_validate_csv(const ValidationReport& report);
std::string write_validate_json(const ValidationReport& report);

}  // namespace swiptsec::expcli
