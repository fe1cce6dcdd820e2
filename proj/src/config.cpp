#include "swiptsec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace swiptsec::expcli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || v.empty()) {
        throw ConfigError(path + ": '" + raw + "' is not a number");
    }
    if (!std::isfinite(out)) {
        throw ConfigError(path + ": value must be finite");
    }
    return out;
}

long long parse_integer(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(path + ": '" + raw + "' is not an integer");
    }
    return out;
}

std::uint64_t parse_uint64(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(path + ": '" + raw + "' is not an unsigned integer");
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& path, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(path, item));
    }
    if (out.empty()) throw ConfigError(path + ": empty list");
    return out;
}

double parse_unit_interval(const std::string& path, const std::string& raw) {
    const double v = parse_double(path, raw);
    if (v < 0.0 || v > 1.0) {
        throw ConfigError(path + ": value " + raw + " out of range [0,1]");
    }
    return v;
}

// Raw scenario-level values before family resolution.
struct ScenarioKeys {
    double omega_s_db = 30.0, omega_e_db = 10.0;
    double rho_s = 0.8, rho_e = 0.8;
    double delta_s = 0.2, delta_e = 0.2;
    double n0_db = 0.1, sigma_db = 0.0;
    double k_s = 5.0, k_e = 5.0;
    double m_s = 2.0, m_e = 2.0;
    int n_eves = 5;
    double zeta = 0.9;
    double integrated_const = 1.0;
    std::string family = "rician";
    std::string main_arch = "separated";
    std::string eve_arch = "separated";
    std::string eve_denominator = "as_printed";
    std::string beta_interpretation = "complement_pair";
    std::size_t trials = 100000;
    std::uint64_t seed = 12345;
};

struct SweepKeys {
    bool present = false;
    std::string parameter;
    std::vector<double> values;
    std::vector<std::string> engines;
};

struct RegionKeys {
    bool present = false;
    std::vector<double> rho_grid;
    std::optional<long long> rho_points;
    std::optional<double> zeta;
    std::string engine = "quadrature";
};

linkmodel::Receiver parse_arch(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "separated") return linkmodel::Receiver::Separated;
    if (v == "integrated") return linkmodel::Receiver::Integrated;
    throw ConfigError(path + ": expected 'separated' or 'integrated', got '" + raw + "'");
}

EngineSelect parse_engine(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "quadrature") return EngineSelect::Quadrature;
    if (v == "closedform") return EngineSelect::ClosedForm;
    if (v == "montecarlo") return EngineSelect::MonteCarlo;
    throw ConfigError(path + ": unknown engine '" + raw + "'");
}

SweepParameter parse_sweep_parameter(const std::string& path, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "main_snr_db") return SweepParameter::MainSnrDb;
    if (v == "eve_snr_db") return SweepParameter::EveSnrDb;
    if (v == "n_eves") return SweepParameter::NEves;
    if (v == "delta_s") return SweepParameter::DeltaS;
    if (v == "delta_e") return SweepParameter::DeltaE;
    if (v == "rho_s") return SweepParameter::RhoS;
    if (v == "k_factor") return SweepParameter::KFactor;
    if (v == "m_shape") return SweepParameter::MShape;
    throw ConfigError(path + ": unknown sweep parameter '" + raw + "'");
}

void apply_scenario_key(ScenarioKeys& keys, const std::string& key,
                        const std::string& value) {
    const std::string path = "scenario." + key;
    if (key == "omega_s_db") keys.omega_s_db = parse_double(path, value);
    else if (key == "omega_e_db") keys.omega_e_db = parse_double(path, value);
    else if (key == "rho_s") keys.rho_s = parse_unit_interval(path, value);
    else if (key == "rho_e") keys.rho_e = parse_unit_interval(path, value);
    else if (key == "delta_s") keys.delta_s = parse_unit_interval(path, value);
    else if (key == "delta_e") keys.delta_e = parse_unit_interval(path, value);
    else if (key == "n0_db") keys.n0_db = parse_double(path, value);
    else if (key == "sigma_db") keys.sigma_db = parse_double(path, value);
    else if (key == "k_s" || key == "k_e") {
        const double v = parse_double(path, value);
        if (v < 0.0) throw ConfigError(path + ": k factor must be >= 0");
        (key == "k_s" ? keys.k_s : keys.k_e) = v;
    } else if (key == "m_s" || key == "m_e") {
        const double v = parse_double(path, value);
        if (v < 0.5) throw ConfigError(path + ": m shape must be >= 0.5");
        (key == "m_s" ? keys.m_s : keys.m_e) = v;
    } else if (key == "n_eves") {
        const long long v = parse_integer(path, value);
        if (v < 1) throw ConfigError(path + ": must be an integer >= 1");
        keys.n_eves = static_cast<int>(v);
    } else if (key == "zeta") {
        keys.zeta = parse_unit_interval(path, value);
    } else if (key == "integrated_const") {
        const double v = parse_double(path, value);
        if (!(v > 0.0)) throw ConfigError(path + ": must be > 0");
        keys.integrated_const = v;
    } else if (key == "family") {
        const std::string v = trim(value);
        if (v != "rician" && v != "nakagami") {
            throw ConfigError(path + ": expected 'rician' or 'nakagami', got '" + value + "'");
        }
        keys.family = v;
    } else if (key == "main_arch") {
        parse_arch(path, value);
        keys.main_arch = trim(value);
    } else if (key == "eve_arch") {
        parse_arch(path, value);
        keys.eve_arch = trim(value);
    } else if (key == "eve_denominator") {
        const std::string v = trim(value);
        if (v != "as_printed" && v != "own_rho") {
            throw ConfigError(path + ": expected 'as_printed' or 'own_rho', got '" + value + "'");
        }
        keys.eve_denominator = v;
    } else if (key == "beta_interpretation") {
        const std::string v = trim(value);
        if (v != "as_printed" && v != "complement_pair") {
            throw ConfigError(path +
                              ": expected 'as_printed' or 'complement_pair', got '" +
                              value + "'");
        }
        keys.beta_interpretation = v;
    } else if (key == "trials") {
        const long long v = parse_integer(path, value);
        if (v < 1000) throw ConfigError(path + ": must be an integer >= 1000");
        keys.trials = static_cast<std::size_t>(v);
    } else if (key == "seed") {
        keys.seed = parse_uint64(path, value);
    } else {
        throw ConfigError("unknown key '" + path + "'");
    }
}

linkmodel::Scenario build_scenario(const ScenarioKeys& keys) {
    linkmodel::Scenario sc;
    sc.main = {keys.omega_s_db, keys.rho_s, keys.delta_s, keys.n0_db, keys.sigma_db};
    sc.eve = {keys.omega_e_db, keys.rho_e, keys.delta_e, keys.n0_db, keys.sigma_db};
    if (keys.family == "rician") {
        sc.main_fading = fading::FadingSpec::rician(keys.k_s);
        sc.eve_fading = fading::FadingSpec::rician(keys.k_e);
    } else {
        sc.main_fading = fading::FadingSpec::nakagami(keys.m_s);
        sc.eve_fading = fading::FadingSpec::nakagami(keys.m_e);
    }
    sc.n_eves = keys.n_eves;
    sc.main_arch = parse_arch("scenario.main_arch", keys.main_arch);
    sc.eve_arch = parse_arch("scenario.eve_arch", keys.eve_arch);
    sc.integrated_const = keys.integrated_const;
    sc.zeta = keys.zeta;
    sc.eve_denominator = keys.eve_denominator == "as_printed"
                             ? linkmodel::EveDenominator::AsPrinted
                             : linkmodel::EveDenominator::OwnRho;
    linkmodel::validate_scenario(sc);
    return sc;
}

void check_sweep_values(SweepParameter parameter, const std::vector<double>& values,
                        const std::string& family) {
    if (values.empty()) throw ConfigError("sweep.values: must be non-empty");
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        increasing = increasing && values[i] > values[i - 1];
        decreasing = decreasing && values[i] < values[i - 1];
    }
    if (values.size() > 1 && !increasing && !decreasing) {
        throw ConfigError("sweep.values: must be strictly monotone");
    }
    for (double v : values) {
        switch (parameter) {
            case SweepParameter::NEves:
                if (v != std::floor(v) || v < 1.0) {
                    throw ConfigError("sweep.values: n_eves sweep requires integers >= 1");
                }
                break;
            case SweepParameter::DeltaS:
            case SweepParameter::DeltaE:
            case SweepParameter::RhoS:
                if (v < 0.0 || v > 1.0) {
                    throw ConfigError("sweep.values: value out of range [0,1]");
                }
                break;
            case SweepParameter::KFactor:
                if (v < 0.0) throw ConfigError("sweep.values: k factor must be >= 0");
                break;
            case SweepParameter::MShape:
                if (v < 0.5) throw ConfigError("sweep.values: m shape must be >= 0.5");
                break;
            default:
                break;
        }
    }
    if (parameter == SweepParameter::KFactor && family != "rician") {
        throw ConfigError("sweep.parameter: k_factor sweep requires family = rician");
    }
    if (parameter == SweepParameter::MShape && family != "nakagami") {
        throw ConfigError("sweep.parameter: m_shape sweep requires family = nakagami");
    }
}

}  // namespace

linkmodel::Scenario default_scenario() {
    return build_scenario(ScenarioKeys{});
}

std::vector<double> default_rho_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) {
        grid.push_back(static_cast<double>(i) / 21.0);
    }
    return grid;
}

ParsedConfig parse_config(const std::string& text) {
    ScenarioKeys scenario_keys;
    SweepKeys sweep_keys;
    RegionKeys region_keys;

    std::string section = "scenario";
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "sweep" && section != "region") {
                throw ConfigError("unknown section '[" + section + "]'");
            }
            if (section == "sweep") sweep_keys.present = true;
            if (section == "region") region_keys.present = true;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed line (expected key = value): " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("malformed line (empty key): " + line);

        if (section == "scenario") {
            apply_scenario_key(scenario_keys, key, value);
        } else if (section == "sweep") {
            if (key == "parameter") sweep_keys.parameter = value;
            else if (key == "values") sweep_keys.values = parse_double_list("sweep.values", value);
            else if (key == "engines") {
                std::stringstream es(value);
                std::string item;
                while (std::getline(es, item, ',')) {
                    sweep_keys.engines.push_back(trim(item));
                }
            } else {
                throw ConfigError("unknown key 'sweep." + key + "'");
            }
        } else {  // region
            if (key == "rho_grid") {
                region_keys.rho_grid = parse_double_list("region.rho_grid", value);
            } else if (key == "rho_points") {
                region_keys.rho_points = parse_integer("region.rho_points", value);
            } else if (key == "zeta") {
                region_keys.zeta = parse_unit_interval("region.zeta", value);
            } else if (key == "engine") {
                parse_engine("region.engine", value);
                region_keys.engine = trim(value);
            } else {
                throw ConfigError("unknown key 'region." + key + "'");
            }
        }
    }

    ParsedConfig parsed;
    parsed.scenario = build_scenario(scenario_keys);
    parsed.trials = scenario_keys.trials;
    parsed.seed = scenario_keys.seed;
    parsed.beta_interpretation = scenario_keys.beta_interpretation == "as_printed"
                                     ? secrecy::BetaInterpretation::AsPrinted
                                     : secrecy::BetaInterpretation::ComplementPair;

    if (sweep_keys.present) {
        SweepConfig sweep;
        sweep.scenario = parsed.scenario;
        if (sweep_keys.parameter.empty()) {
            throw ConfigError("sweep.parameter: missing required key");
        }
        sweep.parameter = parse_sweep_parameter("sweep.parameter", sweep_keys.parameter);
        if (sweep_keys.values.empty()) {
            throw ConfigError("sweep.values: missing required key");
        }
        sweep.values = sweep_keys.values;
        check_sweep_values(sweep.parameter, sweep.values, scenario_keys.family);
        if (sweep_keys.engines.empty()) {
            sweep.engines = {EngineSelect::Quadrature};
        } else {
            for (const std::string& name : sweep_keys.engines) {
                sweep.engines.push_back(parse_engine("sweep.engines", name));
            }
        }
        sweep.trials = parsed.trials;
        sweep.seed = parsed.seed;
        sweep.beta_interpretation = parsed.beta_interpretation;
        parsed.sweep = std::move(sweep);
    }

    if (region_keys.present) {
        RegionConfig region;
        region.scenario = parsed.scenario;
        if (!region_keys.rho_grid.empty() && region_keys.rho_points.has_value()) {
            throw ConfigError("region: specify rho_grid or rho_points, not both");
        }
        if (region_keys.rho_points.has_value()) {
            const long long n = *region_keys.rho_points;
            if (n < 2) throw ConfigError("region.rho_points: must be >= 2");
            for (long long i = 1; i <= n; ++i) {
                region.rho_grid.push_back(static_cast<double>(i) /
                                          static_cast<double>(n + 1));
            }
        } else if (!region_keys.rho_grid.empty()) {
            region.rho_grid = region_keys.rho_grid;
            for (std::size_t i = 0; i < region.rho_grid.size(); ++i) {
                const double r = region.rho_grid[i];
                if (!(r > 0.0 && r < 1.0)) {
                    throw ConfigError("region.rho_grid: values must lie strictly inside (0,1)");
                }
                if (i > 0 && !(r > region.rho_grid[i - 1])) {
                    throw ConfigError("region.rho_grid: values must be strictly increasing");
                }
            }
        } else {
            region.rho_grid = default_rho_grid();
        }
        region.zeta = region_keys.zeta.value_or(parsed.scenario.zeta);
        region.engine = parse_engine("region.engine", region_keys.engine);
        region.trials = parsed.trials;
        region.seed = parsed.seed;
        region.beta_interpretation = parsed.beta_interpretation;
        parsed.region = std::move(region);
    }

    return parsed;
}

SweepConfig sweep_config(const ParsedConfig& parsed) {
    if (!parsed.sweep.has_value()) {
        throw ConfigError("missing required block [sweep]");
    }
    return *parsed.sweep;
}

RegionConfig region_config(const ParsedConfig& parsed) {
    if (!parsed.region.has_value()) {
        throw ConfigError("missing required block [region]");
    }
    return *parsed.region;
}

}  // namespace swiptsec::expcli
