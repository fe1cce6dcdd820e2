#include "swiptsec/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "swiptsec/detail/format.hpp"
#include "swiptsec/secrecy.hpp"

namespace swiptsec::expcli {

using detail::format_double;
using nlohmann::json;

const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::MainSnrDb: return "main_snr_db";
        case SweepParameter::EveSnrDb: return "eve_snr_db";
        case SweepParameter::NEves: return "n_eves";
        case SweepParameter::DeltaS: return "delta_s";
        case SweepParameter::DeltaE: return "delta_e";
        case SweepParameter::RhoS: return "rho_s";
        case SweepParameter::KFactor: return "k_factor";
        case SweepParameter::MShape: return "m_shape";
    }
    return "unknown";
}

const char* engine_select_name(EngineSelect e) {
    switch (e) {
        case EngineSelect::Quadrature: return "quadrature";
        case EngineSelect::ClosedForm: return "closedform";
        case EngineSelect::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_integer_shape(double m) { return m == std::floor(m); }

linkmodel::Scenario apply_sweep_value(const linkmodel::Scenario& base,
                                      SweepParameter parameter, double value) {
    linkmodel::Scenario sc = base;
    switch (parameter) {
        case SweepParameter::MainSnrDb:
            sc.main.omega_db = value;
            break;
        case SweepParameter::EveSnrDb:
            sc.eve.omega_db = value;
            break;
        case SweepParameter::NEves:
            if (value != std::floor(value) || value < 1.0) {
                throw std::invalid_argument("n_eves sweep requires integers >= 1");
            }
            sc.n_eves = static_cast<int>(value);
            break;
        case SweepParameter::DeltaS:
            sc.main.delta = value;
            break;
        case SweepParameter::DeltaE:
            sc.eve.delta = value;
            break;
        case SweepParameter::RhoS:
            sc.main.rho = value;
            break;
        case SweepParameter::KFactor:
            if (sc.main_fading.family != fading::Family::Rician ||
                sc.eve_fading.family != fading::Family::Rician) {
                throw std::invalid_argument("k_factor sweep requires Rician fading");
            }
            sc.main_fading = fading::FadingSpec::rician(value);
            sc.eve_fading = fading::FadingSpec::rician(value);
            break;
        case SweepParameter::MShape:
            if (sc.main_fading.family != fading::Family::NakagamiM ||
                sc.eve_fading.family != fading::Family::NakagamiM) {
                throw std::invalid_argument("m_shape sweep requires Nakagami fading");
            }
            sc.main_fading = fading::FadingSpec::nakagami(value);
            sc.eve_fading = fading::FadingSpec::nakagami(value);
            break;
    }
    linkmodel::validate_scenario(sc);
    return sc;
}

struct CellResult {
    secrecy::SecrecyEstimate est;
    bool skipped = false;
    std::string skip_reason;
};

CellResult skipped_cell(std::string reason) {
    CellResult cell;
    cell.skipped = true;
    cell.skip_reason = std::move(reason);
    cell.est.value = kNaN;
    cell.est.uncertainty = kNaN;
    return cell;
}

// Evaluate one engine at one scenario. Engine/scenario mismatches are
// reported as skips with a stable reason code instead of propagating.
CellResult evaluate_cell(const linkmodel::Scenario& sc, EngineSelect engine,
                         std::size_t trials, std::uint64_t seed,
                         secrecy::BetaInterpretation beta_interpretation,
                         double quad_rel_tol) {
    CellResult cell;
    try {
        switch (engine) {
            case EngineSelect::Quadrature:
                cell.est = secrecy::secrecy_quadrature(sc, quad_rel_tol);
                return cell;
            case EngineSelect::MonteCarlo:
                cell.est = secrecy::secrecy_montecarlo(sc, trials, seed);
                return cell;
            case EngineSelect::ClosedForm:
                break;
        }
        if (sc.main_fading.family != sc.eve_fading.family) {
            return skipped_cell("mixed_fading_families");
        }
        if (!(linkmodel::main_snr_coefficient(sc) > 0.0) ||
            !(linkmodel::eve_snr_coefficient(sc) > 0.0)) {
            return skipped_cell("degenerate_snr_law");
        }
        if (sc.main_fading.family == fading::Family::Rician) {
            cell.est = secrecy::secrecy_closedform_rician(sc, beta_interpretation);
        } else {
            if (!is_integer_shape(sc.main_fading.m_shape) ||
                !is_integer_shape(sc.eve_fading.m_shape)) {
                return skipped_cell("non_integer_m_shape");
            }
            cell.est = secrecy::secrecy_closedform_nakagami(sc);
        }
        return cell;
    } catch (const std::invalid_argument&) {
        return skipped_cell("engine_unsupported");
    }
}

SweepRow row_from_cell(const CellResult& cell, const char* param_name,
                       double sweep_value, EngineSelect engine) {
    SweepRow row;
    row.sweep_param = param_name;
    row.sweep_value = sweep_value;
    row.engine = engine_select_name(engine);
    row.capacity_bits = cell.est.value;
    row.uncertainty = cell.est.uncertainty;
    if (cell.skipped) {
        row.status = "skipped";
        row.reason = cell.skip_reason;
    } else if (cell.est.flagged()) {
        row.status = "flagged";
        row.reason = cell.est.meta.at("flag");
    } else if (!std::isfinite(cell.est.value)) {
        row.status = "flagged";
        row.reason = "non_finite";
    } else {
        row.status = "ok";
        row.reason = "";
    }
    return row;
}

json row_to_json(const SweepRow& row) {
    json j;
    j["sweep_param"] = row.sweep_param;
    j["sweep_value"] = std::isfinite(row.sweep_value) ? json(row.sweep_value) : json();
    j["engine"] = row.engine;
    j["capacity_bits"] =
        std::isfinite(row.capacity_bits) ? json(row.capacity_bits) : json();
    j["uncertainty"] =
        std::isfinite(row.uncertainty) ? json(row.uncertainty) : json();
    j["status"] = row.status;
    j["reason"] = row.reason;
    return j;
}

double json_number(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_null()) return kNaN;
    return v.get<double>();
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    if (config.values.empty()) {
        throw std::invalid_argument("sweep values must be non-empty");
    }
    if (config.engines.empty()) {
        throw std::invalid_argument("sweep engines must be non-empty");
    }
    const char* param_name = sweep_parameter_name(config.parameter);
    std::vector<SweepRow> rows;
    rows.reserve(config.values.size() * config.engines.size());
    for (double value : config.values) {
        const linkmodel::Scenario sc =
            apply_sweep_value(config.scenario, config.parameter, value);
        for (EngineSelect engine : config.engines) {
            const CellResult cell =
                evaluate_cell(sc, engine, config.trials, config.seed,
                              config.beta_interpretation, config.quad_rel_tol);
            rows.push_back(row_from_cell(cell, param_name, value, engine));
        }
    }
    return rows;
}

std::vector<RegionPoint> run_region(const RegionConfig& config) {
    if (config.rho_grid.empty()) {
        throw std::invalid_argument("region rho grid must be non-empty");
    }
    std::vector<RegionPoint> points;
    points.reserve(config.rho_grid.size());
    for (double rho : config.rho_grid) {
        if (!(rho > 0.0 && rho < 1.0)) {
            throw std::invalid_argument("region rho values must lie inside (0,1)");
        }
        linkmodel::Scenario sc = config.scenario;
        sc.main.rho = rho;
        sc.eve.rho = rho;
        linkmodel::validate_scenario(sc);
        RegionPoint point;
        point.rho = rho;
        point.energy_linear = linkmodel::harvested_energy(sc.main, config.zeta);
        const CellResult cell =
            evaluate_cell(sc, config.engine, config.trials, config.seed,
                          config.beta_interpretation, config.quad_rel_tol);
        point.capacity_bits = cell.est.value;
        points.push_back(point);
    }
    return points;
}

std::vector<SweepRow> run_eval(const linkmodel::Scenario& scenario,
                               const std::vector<EngineSelect>& engines,
                               std::size_t trials, std::uint64_t seed,
                               secrecy::BetaInterpretation beta_interpretation,
                               double quad_rel_tol) {
    if (engines.empty()) {
        throw std::invalid_argument("engine set must be non-empty");
    }
    linkmodel::validate_scenario(scenario);
    std::vector<SweepRow> rows;
    rows.reserve(engines.size());
    for (EngineSelect engine : engines) {
        const CellResult cell = evaluate_cell(scenario, engine, trials, seed,
                                              beta_interpretation, quad_rel_tol);
        rows.push_back(row_from_cell(cell, "none", 0.0, engine));
    }
    return rows;
}

ValidationReport run_validate(const linkmodel::Scenario& scenario,
                              std::size_t trials, std::uint64_t seed,
                              secrecy::BetaInterpretation beta_interpretation,
                              double quad_rel_tol) {
    ValidationReport report;

    const secrecy::SecrecyEstimate quad =
        secrecy::secrecy_quadrature(scenario, quad_rel_tol);
    report.quadrature_value = quad.value;
    report.quadrature_error = quad.uncertainty;

    const secrecy::SecrecyEstimate mc =
        secrecy::secrecy_montecarlo(scenario, trials, seed);
    report.montecarlo_value = mc.value;
    report.montecarlo_stderr = mc.uncertainty;

    auto push_row = [&](const char* engine, std::string variant,
                        const secrecy::SecrecyEstimate& est) {
        ValidationRow row;
        row.engine = engine;
        row.variant = std::move(variant);
        row.value = est.value;
        row.uncertainty = est.uncertainty;
        row.status = est.flagged() ? "flagged" : "ok";
        if (est.flagged()) row.note = est.meta.at("flag");
        row.delta_vs_quadrature =
            (std::isfinite(est.value) && std::isfinite(quad.value))
                ? est.value - quad.value
                : kNaN;
        report.rows.push_back(std::move(row));
    };
    auto push_skip = [&](const char* engine, std::string variant,
                         std::string reason) {
        ValidationRow row;
        row.engine = engine;
        row.variant = std::move(variant);
        row.value = kNaN;
        row.uncertainty = kNaN;
        row.status = "skipped";
        row.note = std::move(reason);
        row.delta_vs_quadrature = kNaN;
        report.rows.push_back(std::move(row));
    };

    push_row("quadrature", "", quad);
    push_row("montecarlo", "", mc);

    const bool same_family = scenario.main_fading.family == scenario.eve_fading.family;
    const bool nondegenerate = linkmodel::main_snr_coefficient(scenario) > 0.0 &&
                               linkmodel::eve_snr_coefficient(scenario) > 0.0;
    if (!same_family) {
        push_skip("closedform", "", "mixed_fading_families");
    } else if (!nondegenerate) {
        push_skip("closedform", "", "degenerate_snr_law");
    } else if (scenario.main_fading.family == fading::Family::Rician) {
        // Both beta readings, the requested one first.
        const secrecy::BetaInterpretation primary = beta_interpretation;
        const secrecy::BetaInterpretation secondary =
            primary == secrecy::BetaInterpretation::AsPrinted
                ? secrecy::BetaInterpretation::ComplementPair
                : secrecy::BetaInterpretation::AsPrinted;
        for (secrecy::BetaInterpretation which : {primary, secondary}) {
            try {
                const secrecy::SecrecyEstimate cf =
                    secrecy::secrecy_closedform_rician(scenario, which);
                push_row("closedform",
                         "beta_" + cf.meta.at("beta_interpretation"), cf);
                if (which == primary) {
                    for (const char* key :
                         {"fit_mu_main", "fit_nu_main", "fit_max_abs_error_main",
                          "fit_mu_eve", "fit_nu_eve", "fit_max_abs_error_eve"}) {
                        report.fit_quality.emplace_back(key, cf.meta.at(key));
                    }
                }
            } catch (const std::invalid_argument&) {
                push_skip("closedform",
                          which == secrecy::BetaInterpretation::AsPrinted
                              ? "beta_as_printed"
                              : "beta_complement_pair",
                          "engine_unsupported");
            }
        }
    } else {
        if (!is_integer_shape(scenario.main_fading.m_shape) ||
            !is_integer_shape(scenario.eve_fading.m_shape)) {
            push_skip("closedform", "", "non_integer_m_shape");
        } else {
            for (secrecy::SpInBracket bracket :
                 {secrecy::SpInBracket::GammaRemoved, secrecy::SpInBracket::AsPrinted}) {
                try {
                    const secrecy::SecrecyEstimate cf =
                        secrecy::secrecy_closedform_nakagami(scenario, bracket);
                    push_row("closedform",
                             "bracket_" + cf.meta.at("bracket_variant"), cf);
                } catch (const std::invalid_argument&) {
                    push_skip("closedform",
                              bracket == secrecy::SpInBracket::GammaRemoved
                                  ? "bracket_gamma_removed"
                                  : "bracket_as_printed",
                              "engine_unsupported");
                }
            }
        }
    }

    report.concordance_delta = std::fabs(mc.value - quad.value);
    report.concordance_budget = 4.0 * (mc.uncertainty + quad.uncertainty);
    report.concordance_ok = std::isfinite(report.concordance_delta) &&
                            std::isfinite(report.concordance_budget) &&
                            report.concordance_delta <= report.concordance_budget;
    return report;
}

std::string write_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "sweep_param,sweep_value,engine,capacity_bits,uncertainty,status,reason\n";
    for (const SweepRow& row : rows) {
        out += row.sweep_param;
        out += ',';
        out += format_double(row.sweep_value);
        out += ',';
        out += row.engine;
        out += ',';
        out += format_double(row.capacity_bits);
        out += ',';
        out += format_double(row.uncertainty);
        out += ',';
        out += row.status;
        out += ',';
        out += row.reason;
        out += '\n';
    }
    return out;
}

std::string write_sweep_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const SweepRow& row : rows) arr.push_back(row_to_json(row));
    return arr.dump(2) + "\n";
}

std::vector<SweepRow> read_sweep_json(const std::string& text) {
    const json arr = json::parse(text);
    if (!arr.is_array()) {
        throw std::runtime_error("sweep JSON document must be an array");
    }
    std::vector<SweepRow> rows;
    rows.reserve(arr.size());
    for (const json& j : arr) {
        SweepRow row;
        row.sweep_param = j.at("sweep_param").get<std::string>();
        row.sweep_value = json_number(j, "sweep_value");
        row.engine = j.at("engine").get<std::string>();
        row.capacity_bits = json_number(j, "capacity_bits");
        row.uncertainty = json_number(j, "uncertainty");
        row.status = j.at("status").get<std::string>();
        row.reason = j.at("reason").get<std::string>();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string write_region_csv(const std::vector<RegionPoint>& points) {
    std::string out = "energy_linear,capacity_bits,rho\n";
    for (const RegionPoint& point : points) {
        out += format_double(point.energy_linear);
        out += ',';
        out += format_double(point.capacity_bits);
        out += ',';
        out += format_double(point.rho);
        out += '\n';
    }
    return out;
}

std::string write_region_json(const std::vector<RegionPoint>& points) {
    json arr = json::array();
    for (const RegionPoint& point : points) {
        json j;
        j["energy_linear"] =
            std::isfinite(point.energy_linear) ? json(point.energy_linear) : json();
        j["capacity_bits"] =
            std::isfinite(point.capacity_bits) ? json(point.capacity_bits) : json();
        j["rho"] = std::isfinite(point.rho) ? json(point.rho) : json();
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::vector<RegionPoint> read_region_json(const std::string& text) {
    const json arr = json::parse(text);
    if (!arr.is_array()) {
        throw std::runtime_error("region JSON document must be an array");
    }
    std::vector<RegionPoint> points;
    points.reserve(arr.size());
    for (const json& j : arr) {
        RegionPoint point;
        point.energy_linear = json_number(j, "energy_linear");
        point.capacity_bits = json_number(j, "capacity_bits");
        point.rho = json_number(j, "rho");
        points.push_back(point);
    }
    return points;
}

std::string write_validate_text(const ValidationReport& report) {
    std::ostringstream out;
    out << "cross-engine validation\n";
    for (const ValidationRow& row : report.rows) {
        out << "  engine=" << row.engine;
        if (!row.variant.empty()) out << " variant=" << row.variant;
        out << " value=" << format_double(row.value)
            << " uncertainty=" << format_double(row.uncertainty)
            << " status=" << row.status;
        if (!row.note.empty()) out << " note=" << row.note;
        out << " delta_vs_quadrature=" << format_double(row.delta_vs_quadrature)
            << "\n";
    }
    out << "concordance |montecarlo - quadrature| = "
        << format_double(report.concordance_delta)
        << " budget = " << format_double(report.concordance_budget) << " -> "
        << (report.concordance_ok ? "PASS" : "FAIL") << "\n";
    for (const auto& [key, value] : report.fit_quality) {
        out << "fit " << key << "=" << value << "\n";
    }
    return out.str();
}

std::string write_validate_csv(const ValidationReport& report) {
    std::string out =
        "engine,variant,value,uncertainty,status,note,delta_vs_quadrature\n";
    for (const ValidationRow& row : report.rows) {
        out += row.engine;
        out += ',';
        out += row.variant;
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += format_double(row.uncertainty);
        out += ',';
        out += row.status;
        out += ',';
        out += row.note;
        out += ',';
        out += format_double(row.delta_vs_quadrature);
        out += '\n';
    }
    return out;
}

std::string write_validate_json(const ValidationReport& report) {
    json doc;
    json rows = json::array();
    for (const ValidationRow& row : report.rows) {
        json j;
        j["engine"] = row.engine;
        j["variant"] = row.variant;
        j["value"] = std::isfinite(row.value) ? json(row.value) : json();
        j["uncertainty"] =
            std::isfinite(row.uncertainty) ? json(row.uncertainty) : json();
        j["status"] = row.status;
        j["note"] = row.note;
        j["delta_vs_quadrature"] = std::isfinite(row.delta_vs_quadrature)
                                       ? json(row.delta_vs_quadrature)
                                       : json();
        rows.push_back(std::move(j));
    }
    doc["rows"] = std::move(rows);
    doc["quadrature_value"] = std::isfinite(report.quadrature_value)
                                  ? json(report.quadrature_value)
                                  : json();
    doc["quadrature_error"] = std::isfinite(report.quadrature_error)
                                  ? json(report.quadrature_error)
                                  : json();
    doc["montecarlo_value"] = std::isfinite(report.montecarlo_value)
                                  ? json(report.montecarlo_value)
                                  : json();
    doc["montecarlo_stderr"] = std::isfinite(report.montecarlo_stderr)
                                   ? json(report.montecarlo_stderr)
                                   : json();
    doc["concordance_delta"] = std::isfinite(report.concordance_delta)
                                   ? json(report.concordance_delta)
                                   : json();
    doc["concordance_budget"] = std::isfinite(report.concordance_budget)
                                    ? json(report.concordance_budget)
                                    : json();
    doc["concordance_ok"] = report.concordance_ok;
    json fit = json::object();
    for (const auto& [key, value] : report.fit_quality) fit[key] = value;
    doc["fit_quality"] = std::move(fit);
    return doc.dump(2) + "\n";
}

}  // namespace swiptsec::expcli
