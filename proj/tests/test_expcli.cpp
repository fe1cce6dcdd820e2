#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "swiptsec/config.hpp"
#include "swiptsec/experiment.hpp"

using namespace swiptsec;

TEST_CASE("empty config yields the full default scenario") {
    const expcli::ParsedConfig parsed = expcli::parse_config("");
    const linkmodel::Scenario& sc = parsed.scenario;
    CHECK(sc.main.omega_db == 30.0);
    CHECK(sc.eve.omega_db == 10.0);
    CHECK(sc.main.rho == 0.8);
    CHECK(sc.eve.rho == 0.8);
    CHECK(sc.main.delta == 0.2);
    CHECK(sc.eve.delta == 0.2);
    CHECK(sc.main.n0_db == 0.1);
    CHECK(sc.main.sigma_db == 0.0);
    CHECK(sc.main_fading.family == fading::Family::Rician);
    CHECK(sc.main_fading.k_factor == 5.0);
    CHECK(sc.eve_fading.k_factor == 5.0);
    CHECK(sc.n_eves == 5);
    CHECK(sc.zeta == 0.9);
    CHECK(sc.integrated_const == 1.0);
    CHECK(sc.main_arch == linkmodel::Receiver::Separated);
    CHECK(sc.eve_arch == linkmodel::Receiver::Separated);
    CHECK(sc.eve_denominator == linkmodel::EveDenominator::AsPrinted);
    CHECK(parsed.trials == 100000);
    CHECK(parsed.seed == 12345);
    CHECK(parsed.beta_interpretation ==
          secrecy::BetaInterpretation::ComplementPair);
    CHECK_FALSE(parsed.sweep.has_value());
    CHECK_FALSE(parsed.region.has_value());
    CHECK(expcli::default_scenario().main.omega_db == 30.0);
}

TEST_CASE("scenario keys are parsed with comments and whitespace") {
    const expcli::ParsedConfig parsed = expcli::parse_config(
        "# leading comment\n"
        "omega_s_db = 25   ; inline note\n"
        "  omega_e_db=5\n"
        "\n"
        "[scenario]\n"
        "family = nakagami\n"
        "m_s = 3\n"
        "m_e = 2\n"
        "rho_e = 0.6\n"
        "delta_e = 0.1\n"
        "n_eves = 7\n"
        "zeta = 0.5\n"
        "trials = 20000\n"
        "seed = 99\n"
        "eve_denominator = own_rho\n"
        "beta_interpretation = as_printed\n"
        "eve_arch = integrated\n"
        "integrated_const = 2\n");
    const linkmodel::Scenario& sc = parsed.scenario;
    CHECK(sc.main.omega_db == 25.0);
    CHECK(sc.eve.omega_db == 5.0);
    CHECK(sc.eve.rho == 0.6);
    CHECK(sc.eve.delta == 0.1);
    CHECK(sc.main_fading.family == fading::Family::NakagamiM);
    CHECK(sc.main_fading.m_shape == 3.0);
    CHECK(sc.eve_fading.m_shape == 2.0);
    CHECK(sc.n_eves == 7);
    CHECK(sc.zeta == 0.5);
    CHECK(sc.eve_denominator == linkmodel::EveDenominator::OwnRho);
    CHECK(sc.eve_arch == linkmodel::Receiver::Integrated);
    CHECK(sc.integrated_const == 2.0);
    CHECK(parsed.trials == 20000);
    CHECK(parsed.seed == 99);
    CHECK(parsed.beta_interpretation == secrecy::BetaInterpretation::AsPrinted);
}

TEST_CASE("config errors carry the key path") {
    CHECK_THROWS_WITH_AS((void)expcli::parse_config("rho_s = 1.5\n"),
                         "scenario.rho_s: value 1.5 out of range [0,1]",
                         expcli::ConfigError);
    CHECK_THROWS_WITH_AS((void)expcli::parse_config("n_eves = 0\n"),
                         "scenario.n_eves: must be an integer >= 1",
                         expcli::ConfigError);
    CHECK_THROWS_WITH_AS((void)expcli::parse_config("bogus = 1\n"),
                         "unknown key 'scenario.bogus'", expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("[plotting]\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("omega_s_db = ten\n"),
                    expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("delta_s\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("m_s = 0.2\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("k_e = -1\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("trials = 10\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("zeta = 1.2\n"), expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("family = rayleigh\n"),
                    expcli::ConfigError);
}

TEST_CASE("sweep block parsing") {
    const expcli::ParsedConfig parsed = expcli::parse_config(
        "[sweep]\n"
        "parameter = eve_snr_db\n"
        "values = 0, 5, 10, 15\n"
        "engines = quadrature, montecarlo\n");
    const expcli::SweepConfig sweep = expcli::sweep_config(parsed);
    CHECK(sweep.parameter == expcli::SweepParameter::EveSnrDb);
    CHECK(sweep.values == std::vector<double>{0.0, 5.0, 10.0, 15.0});
    REQUIRE(sweep.engines.size() == 2);
    CHECK(sweep.engines[0] == expcli::EngineSelect::Quadrature);
    CHECK(sweep.engines[1] == expcli::EngineSelect::MonteCarlo);

    // Engines default to quadrature; decreasing grids are accepted.
    const expcli::ParsedConfig down = expcli::parse_config(
        "[sweep]\nparameter = delta_s\nvalues = 0.9, 0.5, 0.1\n");
    CHECK(down.sweep->engines ==
          std::vector<expcli::EngineSelect>{expcli::EngineSelect::Quadrature});

    CHECK_THROWS_AS((void)expcli::parse_config("[sweep]\nvalues = 1,2\n"),
                    expcli::ConfigError);  // parameter missing
    CHECK_THROWS_AS((void)expcli::parse_config("[sweep]\nparameter = rho_s\n"),
                    expcli::ConfigError);  // values missing
    CHECK_THROWS_AS(
        (void)expcli::parse_config(
            "[sweep]\nparameter = rho_s\nvalues = 0.1, 0.5, 0.3\n"),
        expcli::ConfigError);  // not monotone
    CHECK_THROWS_AS(
        (void)expcli::parse_config("[sweep]\nparameter = n_eves\nvalues = 1, 2.5\n"),
        expcli::ConfigError);  // fractional eavesdropper count
    CHECK_THROWS_AS(
        (void)expcli::parse_config(
            "[sweep]\nparameter = m_shape\nvalues = 1, 2\n"),
        expcli::ConfigError);  // m sweep needs the Nakagami family
    CHECK_THROWS_AS(
        (void)expcli::parse_config(
            "family = nakagami\n[sweep]\nparameter = k_factor\nvalues = 1, 2\n"),
        expcli::ConfigError);  // k sweep needs the Rician family
    CHECK_THROWS_WITH_AS(
        (void)expcli::sweep_config(expcli::parse_config("")),
        "missing required block [sweep]", expcli::ConfigError);
}

TEST_CASE("region block parsing") {
    const expcli::ParsedConfig points = expcli::parse_config(
        "[region]\nrho_points = 4\nzeta = 0.7\nengine = quadrature\n");
    const expcli::RegionConfig region = expcli::region_config(points);
    REQUIRE(region.rho_grid.size() == 4);
    CHECK(region.rho_grid[0] == doctest::Approx(0.2));
    CHECK(region.rho_grid[3] == doctest::Approx(0.8));
    CHECK(region.zeta == 0.7);
    CHECK(region.engine == expcli::EngineSelect::Quadrature);

    const expcli::ParsedConfig grid = expcli::parse_config(
        "[region]\nrho_grid = 0.25, 0.5, 0.75\n");
    CHECK(grid.region->rho_grid == std::vector<double>{0.25, 0.5, 0.75});
    CHECK(grid.region->zeta == 0.9);  // inherits the scenario value

    const expcli::ParsedConfig defaulted = expcli::parse_config("[region]\n");
    CHECK(defaulted.region->rho_grid == expcli::default_rho_grid());
    CHECK(expcli::default_rho_grid().size() == 20);
    CHECK(expcli::default_rho_grid().front() == doctest::Approx(1.0 / 21.0));

    CHECK_THROWS_AS(
        (void)expcli::parse_config("[region]\nrho_grid = 0.5, 0.25\n"),
        expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("[region]\nrho_grid = 0, 0.5\n"),
                    expcli::ConfigError);
    CHECK_THROWS_AS(
        (void)expcli::parse_config("[region]\nrho_grid = 0.5\nrho_points = 3\n"),
        expcli::ConfigError);
    CHECK_THROWS_AS((void)expcli::parse_config("[region]\nrho_points = 1\n"),
                    expcli::ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)expcli::region_config(expcli::parse_config("")),
        "missing required block [region]", expcli::ConfigError);
}

TEST_CASE("run_eval produces one row per engine in order") {
    const linkmodel::Scenario sc = expcli::default_scenario();
    const auto rows = expcli::run_eval(
        sc,
        {expcli::EngineSelect::Quadrature, expcli::EngineSelect::MonteCarlo,
         expcli::EngineSelect::ClosedForm},
        20000, 5u);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].engine == "quadrature");
    CHECK(rows[1].engine == "montecarlo");
    CHECK(rows[2].engine == "closedform");
    for (const auto& row : rows) {
        CHECK(row.sweep_param == "none");
        CHECK(row.sweep_value == 0.0);
        CHECK(row.status == "ok");
        CHECK(std::isfinite(row.capacity_bits));
    }
    CHECK(rows[0].capacity_bits == doctest::Approx(1.598987558251215));
    CHECK_THROWS_AS((void)expcli::run_eval(sc, {}, 20000, 5u),
                    std::invalid_argument);
}

TEST_CASE("run_sweep preserves order and skips incompatible engines") {
    expcli::SweepConfig config;
    config.scenario = expcli::default_scenario();
    config.parameter = expcli::SweepParameter::RhoS;
    config.values = {0.0, 0.4, 0.8};
    config.engines = {expcli::EngineSelect::Quadrature,
                      expcli::EngineSelect::ClosedForm};
    config.trials = 20000;
    const auto rows = expcli::run_sweep(config);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].sweep_param == "rho_s");
        CHECK(rows[i].sweep_value == config.values[i / 2]);
        CHECK(rows[i].engine == (i % 2 == 0 ? "quadrature" : "closedform"));
    }
    // rho = 0: zero effective SNR. Quadrature reports 0, the closed
    // form skips with a stable reason code.
    CHECK(rows[0].status == "ok");
    CHECK(rows[0].capacity_bits == 0.0);
    CHECK(rows[1].status == "skipped");
    CHECK(rows[1].reason == "degenerate_snr_law");
    CHECK(std::isnan(rows[1].capacity_bits));
    CHECK(rows[4].status == "ok");
    CHECK(rows[5].status == "ok");

    // Mixed fading families: closed form skipped, quadrature fine.
    expcli::SweepConfig mixed = config;
    mixed.scenario.eve_fading = fading::FadingSpec::nakagami(2.0);
    mixed.values = {0.8};
    const auto mixed_rows = expcli::run_sweep(mixed);
    REQUIRE(mixed_rows.size() == 2);
    CHECK(mixed_rows[0].status == "ok");
    CHECK(mixed_rows[1].status == "skipped");
    CHECK(mixed_rows[1].reason == "mixed_fading_families");

    // Non-integer Nakagami m: closed form skipped.
    expcli::SweepConfig frac = config;
    frac.scenario.main_fading = fading::FadingSpec::nakagami(2.5);
    frac.scenario.eve_fading = fading::FadingSpec::nakagami(2.5);
    frac.values = {0.8};
    const auto frac_rows = expcli::run_sweep(frac);
    CHECK(frac_rows[1].status == "skipped");
    CHECK(frac_rows[1].reason == "non_integer_m_shape");

    expcli::SweepConfig empty = config;
    empty.engines.clear();
    CHECK_THROWS_AS((void)expcli::run_sweep(empty), std::invalid_argument);
}

TEST_CASE("n_eves sweep is non-increasing under quadrature") {
    expcli::SweepConfig config;
    config.scenario = expcli::default_scenario();
    config.parameter = expcli::SweepParameter::NEves;
    config.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    config.engines = {expcli::EngineSelect::Quadrature};
    const auto rows = expcli::run_sweep(config);
    REQUIRE(rows.size() == 10);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].capacity_bits <= rows[i - 1].capacity_bits + 1e-12);
    }
}

TEST_CASE("run_region endpoint behavior") {
    expcli::RegionConfig config;
    config.scenario = expcli::default_scenario();
    config.rho_grid = {1e-5, 0.25, 0.5, 0.75, 0.999};
    config.zeta = 0.9;
    const auto points = expcli::run_region(config);
    REQUIRE(points.size() == 5);
    // Energy is exactly zeta * (1-rho) * Omega and decreases in rho.
    CHECK(points[0].energy_linear ==
          doctest::Approx(0.9 * (1.0 - 1e-5) * 1000.0).epsilon(1e-12));
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].energy_linear < points[i - 1].energy_linear);
        CHECK(std::isfinite(points[i].capacity_bits));
    }
    // rho -> 0: no power left for decoding, capacity collapses.
    CHECK(points[0].capacity_bits < 0.05);
    CHECK(points[2].capacity_bits > 1.0);

    expcli::RegionConfig bad = config;
    bad.rho_grid = {0.5, 1.0};
    CHECK_THROWS_AS((void)expcli::run_region(bad), std::invalid_argument);
    bad.rho_grid.clear();
    CHECK_THROWS_AS((void)expcli::run_region(bad), std::invalid_argument);
}

TEST_CASE("better estimation dominates the secrecy-energy region pointwise") {
    expcli::RegionConfig ideal;
    ideal.scenario = expcli::default_scenario();
    ideal.scenario.main.delta = 0.0;
    ideal.scenario.eve.delta = 0.0;
    ideal.rho_grid = {0.15, 0.35, 0.55, 0.75, 0.95};
    expcli::RegionConfig impaired = ideal;
    impaired.scenario.main.delta = 0.1;
    impaired.scenario.eve.delta = 0.1;
    const auto a = expcli::run_region(ideal);
    const auto b = expcli::run_region(impaired);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].energy_linear == b[i].energy_linear);  // same harvest
        CHECK(a[i].capacity_bits > b[i].capacity_bits);
    }
}

TEST_CASE("validation report cross-checks every engine") {
    const expcli::ValidationReport report =
        expcli::run_validate(expcli::default_scenario(), 50000, 321u);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].engine == "quadrature");
    CHECK(report.rows[0].delta_vs_quadrature == 0.0);
    CHECK(report.rows[1].engine == "montecarlo");
    CHECK(report.rows[2].engine == "closedform");
    CHECK(report.rows[2].variant == "beta_complement_pair");
    CHECK(report.rows[2].status == "ok");
    CHECK(std::isfinite(report.rows[2].delta_vs_quadrature));
    CHECK(report.rows[3].variant == "beta_as_printed");
    CHECK(report.rows[3].status == "flagged");
    CHECK(report.rows[3].note == "beta_pole");
    CHECK_FALSE(std::isfinite(report.rows[3].value));
    CHECK(report.concordance_ok);
    CHECK(report.concordance_delta ==
          doctest::Approx(std::fabs(report.montecarlo_value -
                                    report.quadrature_value)));
    CHECK_FALSE(report.fit_quality.empty());

    // Nakagami scenario: bracket variants instead of beta variants.
    linkmodel::Scenario nak = expcli::default_scenario();
    nak.main_fading = fading::FadingSpec::nakagami(2.0);
    nak.eve_fading = fading::FadingSpec::nakagami(2.0);
    nak.eve_arch = linkmodel::Receiver::Integrated;
    const expcli::ValidationReport nak_report =
        expcli::run_validate(nak, 50000, 321u);
    REQUIRE(nak_report.rows.size() == 4);
    CHECK(nak_report.rows[2].variant == "bracket_gamma_removed");
    CHECK(nak_report.rows[2].status == "ok");
    CHECK(std::isfinite(nak_report.rows[2].value));
    CHECK(nak_report.rows[3].variant == "bracket_as_printed");
    CHECK(nak_report.concordance_ok);
}

TEST_CASE("CSV writers produce the documented schema byte-for-byte") {
    std::vector<expcli::SweepRow> rows(2);
    rows[0] = {"main_snr_db", 10.0, "quadrature", 0.5, 0.25, "ok", ""};
    rows[1] = {"main_snr_db", 20.0, "closedform",
               std::numeric_limits<double>::quiet_NaN(),
               std::numeric_limits<double>::quiet_NaN(), "skipped",
               "mixed_fading_families"};
    CHECK(expcli::write_sweep_csv(rows) ==
          "sweep_param,sweep_value,engine,capacity_bits,uncertainty,status,reason\n"
          "main_snr_db,10,quadrature,0.5,0.25,ok,\n"
          "main_snr_db,20,closedform,nan,nan,skipped,mixed_fading_families\n");

    std::vector<expcli::RegionPoint> points(2);
    points[0] = {180.0, 1.25, 0.8};
    points[1] = {90.0, std::numeric_limits<double>::infinity(), 0.9};
    CHECK(expcli::write_region_csv(points) ==
          "energy_linear,capacity_bits,rho\n"
          "180,1.25,0.8\n"
          "90,inf,0.9\n");
}

TEST_CASE("JSON round-trip preserves the table to full precision") {
    std::vector<expcli::SweepRow> rows(3);
    rows[0] = {"delta_s", 0.1, "quadrature", 1.5989875582518063,
               6.913101038140288e-08, "ok", ""};
    rows[1] = {"delta_s", 0.2, "montecarlo", 0.3333333333333333, 1e-300, "ok", ""};
    rows[2] = {"delta_s", 0.3, "closedform",
               std::numeric_limits<double>::quiet_NaN(),
               std::numeric_limits<double>::quiet_NaN(), "skipped",
               "engine_unsupported"};
    const std::string text = expcli::write_sweep_json(rows);
    const auto back = expcli::read_sweep_json(text);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].sweep_param == rows[i].sweep_param);
        CHECK(back[i].sweep_value == rows[i].sweep_value);
        CHECK(back[i].engine == rows[i].engine);
        CHECK(back[i].capacity_bits == rows[i].capacity_bits);
        CHECK(back[i].uncertainty == rows[i].uncertainty);
        CHECK(back[i].status == rows[i].status);
    }
    CHECK(std::isnan(back[2].capacity_bits));
    CHECK(back[2].reason == "engine_unsupported");

    std::vector<expcli::RegionPoint> points(1);
    points[0] = {180.00000000000003, 1.0000000000000002, 0.8};
    const auto points_back = expcli::read_region_json(expcli::write_region_json(points));
    REQUIRE(points_back.size() == 1);
    CHECK(points_back[0].energy_linear == points[0].energy_linear);
    CHECK(points_back[0].capacity_bits == points[0].capacity_bits);
    CHECK(points_back[0].rho == points[0].rho);
}

TEST_CASE("outputs are deterministic for fixed config and seed") {
    expcli::SweepConfig config;
    config.scenario = expcli::default_scenario();
    config.parameter = expcli::SweepParameter::MainSnrDb;
    config.values = {20.0, 30.0};
    config.engines = {expcli::EngineSelect::Quadrature,
                      expcli::EngineSelect::MonteCarlo};
    config.trials = 70000;  // spans multiple Monte Carlo chunks
    config.seed = 2024u;
    const std::string a = expcli::write_sweep_csv(expcli::run_sweep(config));
    const std::string b = expcli::write_sweep_csv(expcli::run_sweep(config));
    CHECK(a == b);
    const std::string ja = expcli::write_sweep_json(expcli::run_sweep(config));
    const std::string jb = expcli::write_sweep_json(expcli::run_sweep(config));
    CHECK(ja == jb);
}

TEST_CASE("validate writers include every row and the concordance verdict") {
    const expcli::ValidationReport report =
        expcli::run_validate(expcli::default_scenario(), 20000, 9u);
    const std::string text = expcli::write_validate_text(report);
    CHECK(text.find("engine=quadrature") != std::string::npos);
    CHECK(text.find("engine=montecarlo") != std::string::npos);
    CHECK(text.find("beta_as_printed") != std::string::npos);
    CHECK(text.find("concordance") != std::string::npos);
    const std::string csv = expcli::write_validate_csv(report);
    CHECK(csv.rfind("engine,variant,value,uncertainty,status,note,delta_vs_quadrature\n",
                    0) == 0);
    const std::string json_text = expcli::write_validate_json(report);
    CHECK(json_text.find("\"concordance_ok\"") != std::string::npos);
    CHECK(json_text.find("\"fit_quality\"") != std::string::npos);
}
