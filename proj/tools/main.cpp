#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swiptsec/config.hpp"
#include "swiptsec/experiment.hpp"

namespace {

using namespace swiptsec;

struct CommonOptions {
    std::string config_path;
    std::string engine_csv;
    std::string output_format;
    std::string out_path;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts, bool with_engine,
                      const std::vector<std::string>& formats,
                      const std::string& default_format) {
    opts.output_format = default_format;
    cmd->add_option("--config", opts.config_path, "configuration file path");
    if (with_engine) {
        cmd->add_option("--engine", opts.engine_csv,
                        "engine name[,name]: quadrature, closedform, montecarlo");
    }
    cmd->add_option("--output", opts.output_format, "output format")
        ->check(CLI::IsMember(formats));
    cmd->add_option("--out", opts.out_path, "output file path (default stdout)");
    cmd->add_option("--trials", opts.trials, "Monte Carlo trial count override");
    cmd->add_option("--seed", opts.seed, "Monte Carlo seed override");
}

expcli::ParsedConfig load_config(const CommonOptions& opts) {
    std::string text;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path, std::ios::binary);
        if (!in) {
            throw expcli::ConfigError("cannot open config file: " + opts.config_path);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }
    expcli::ParsedConfig parsed = expcli::parse_config(text);
    if (opts.trials.has_value()) {
        if (*opts.trials < 1000) {
            throw expcli::ConfigError("--trials: must be an integer >= 1000");
        }
        parsed.trials = static_cast<std::size_t>(*opts.trials);
    }
    if (opts.seed.has_value()) parsed.seed = *opts.seed;
    if (parsed.sweep.has_value()) {
        parsed.sweep->trials = parsed.trials;
        parsed.sweep->seed = parsed.seed;
    }
    if (parsed.region.has_value()) {
        parsed.region->trials = parsed.trials;
        parsed.region->seed = parsed.seed;
    }
    return parsed;
}

std::vector<expcli::EngineSelect> parse_engine_list(const std::string& csv) {
    std::vector<expcli::EngineSelect> engines;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t b = item.find_first_not_of(" \t");
        const std::size_t e = item.find_last_not_of(" \t");
        const std::string name =
            b == std::string::npos ? std::string() : item.substr(b, e - b + 1);
        if (name == "quadrature") engines.push_back(expcli::EngineSelect::Quadrature);
        else if (name == "closedform") engines.push_back(expcli::EngineSelect::ClosedForm);
        else if (name == "montecarlo") engines.push_back(expcli::EngineSelect::MonteCarlo);
        else throw expcli::ConfigError("--engine: unknown engine '" + name + "'");
    }
    if (engines.empty()) throw expcli::ConfigError("--engine: empty engine list");
    return engines;
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw expcli::ConfigError("cannot open output file: " + out_path);
    out << payload;
    if (!out) throw expcli::ConfigError("failed writing output file: " + out_path);
}

// Exit 3: an engine produced a non-finite value without raising its
// own diagnostic flag (rows where that happened carry reason
// "non_finite"; flagged divergences are documented results, not
// numeric failures).
bool has_unflagged_nonfinite(const std::vector<expcli::SweepRow>& rows) {
    for (const expcli::SweepRow& row : rows) {
        if (row.reason == "non_finite") return true;
    }
    return false;
}

int cmd_eval(const CommonOptions& opts) {
    const expcli::ParsedConfig parsed = load_config(opts);
    const std::vector<expcli::EngineSelect> engines =
        opts.engine_csv.empty()
            ? std::vector<expcli::EngineSelect>{expcli::EngineSelect::Quadrature}
            : parse_engine_list(opts.engine_csv);
    const std::vector<expcli::SweepRow> rows =
        expcli::run_eval(parsed.scenario, engines, parsed.trials, parsed.seed,
                         parsed.beta_interpretation);
    emit(opts.output_format == "json" ? expcli::write_sweep_json(rows)
                                      : expcli::write_sweep_csv(rows),
         opts.out_path);
    return has_unflagged_nonfinite(rows) ? 3 : 0;
}

int cmd_sweep(const CommonOptions& opts) {
    const expcli::ParsedConfig parsed = load_config(opts);
    expcli::SweepConfig config = expcli::sweep_config(parsed);
    if (!opts.engine_csv.empty()) config.engines = parse_engine_list(opts.engine_csv);
    const std::vector<expcli::SweepRow> rows = expcli::run_sweep(config);
    emit(opts.output_format == "json" ? expcli::write_sweep_json(rows)
                                      : expcli::write_sweep_csv(rows),
         opts.out_path);
    return has_unflagged_nonfinite(rows) ? 3 : 0;
}

int cmd_region(const CommonOptions& opts) {
    const expcli::ParsedConfig parsed = load_config(opts);
    expcli::RegionConfig config;
    if (parsed.region.has_value()) {
        config = *parsed.region;
    } else {
        config.scenario = parsed.scenario;
        config.rho_grid = expcli::default_rho_grid();
        config.zeta = parsed.scenario.zeta;
        config.trials = parsed.trials;
        config.seed = parsed.seed;
        config.beta_interpretation = parsed.beta_interpretation;
    }
    if (!opts.engine_csv.empty()) {
        const std::vector<expcli::EngineSelect> engines =
            parse_engine_list(opts.engine_csv);
        if (engines.size() != 1) {
            throw expcli::ConfigError("--engine: region accepts a single engine");
        }
        config.engine = engines.front();
    }
    const std::vector<expcli::RegionPoint> points = expcli::run_region(config);
    emit(opts.output_format == "json" ? expcli::write_region_json(points)
                                      : expcli::write_region_csv(points),
         opts.out_path);
    // Region rows carry no status channel, so any non-finite capacity
    // here is by construction unflagged.
    for (const expcli::RegionPoint& point : points) {
        if (!std::isfinite(point.capacity_bits)) return 3;
    }
    return 0;
}

int cmd_validate(const CommonOptions& opts) {
    const expcli::ParsedConfig parsed = load_config(opts);
    const expcli::ValidationReport report = expcli::run_validate(
        parsed.scenario, parsed.trials, parsed.seed, parsed.beta_interpretation);
    std::string payload;
    if (opts.output_format == "json") payload = expcli::write_validate_json(report);
    else if (opts.output_format == "csv") payload = expcli::write_validate_csv(report);
    else payload = expcli::write_validate_text(report);
    emit(payload, opts.out_path);
    for (const expcli::ValidationRow& row : report.rows) {
        if (row.status == "ok" && !std::isfinite(row.value)) return 3;
    }
    if (!report.concordance_ok) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergodic secrecy capacity toolkit for SWIPT-enabled links"};
    app.require_subcommand(1);

    CommonOptions eval_opts, sweep_opts, region_opts, validate_opts;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "evaluate one scenario with selected engines");
    add_common_flags(eval_cmd, eval_opts, true, {"csv", "json"}, "csv");
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "sweep one parameter across engines");
    add_common_flags(sweep_cmd, sweep_opts, true, {"csv", "json"}, "csv");
    CLI::App* region_cmd =
        app.add_subcommand("region", "trace the secrecy-energy trade-off curve");
    add_common_flags(region_cmd, region_opts, true, {"csv", "json"}, "csv");
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "cross-check all engines on one scenario");
    add_common_flags(validate_cmd, validate_opts, false, {"text", "csv", "json"},
                     "text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (eval_cmd->parsed()) return cmd_eval(eval_opts);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (region_cmd->parsed()) return cmd_region(region_opts);
        return cmd_validate(validate_opts);
    } catch (const expcli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
