#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "swiptsec/linkmodel.hpp"

using namespace swiptsec;

namespace {

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}

// Default-parameter scenario used throughout: 30 dB main / 10 dB eve
// transmit SNR, rho 0.8, delta 0.2, 0.1 dB antenna noise, 0 dB
// processing noise, Rician K = 5.
linkmodel::Scenario reference_scenario() {
    linkmodel::Scenario sc;
    sc.main = {30.0, 0.8, 0.2, 0.1, 0.0};
    sc.eve = {10.0, 0.8, 0.2, 0.1, 0.0};
    return sc;
}

}  // namespace

TEST_CASE("dB conversions") {
    CHECK(linkmodel::db_to_linear(0.0) == 1.0);
    CHECK(rel_err(linkmodel::db_to_linear(30.0), 1000.0) <= 1e-12);
    CHECK(rel_err(linkmodel::db_to_linear(10.0), 10.0) <= 1e-12);
    CHECK(rel_err(linkmodel::db_to_linear(-10.0), 0.1) <= 1e-12);
    const linkmodel::LinkBudget link{30.0, 0.8, 0.2, 0.1, 0.0};
    CHECK(rel_err(link.omega_linear(), 1000.0) <= 1e-12);
    CHECK(rel_err(link.n0_linear(), 1.0232929922807541) <= 1e-12);
    CHECK(link.sigma_linear() == 1.0);
}

TEST_CASE("effective SNR coefficients at the reference parameters") {
    const linkmodel::Scenario sc = reference_scenario();
    // A = rho*Omega*(1-d^2) / (Omega*rho*d^2 + rho*N0 + sigma^2) with
    // Omega = 1000, rho = 0.8, d = 0.2, N0 = 10^{0.01}, sigma^2 = 1.
    CHECK(rel_err(linkmodel::main_snr_coefficient(sc), 22.709373508595586) <= 1e-12);
    CHECK(rel_err(linkmodel::eve_snr_coefficient(sc), 3.5910766338446266) <= 1e-12);
}

TEST_CASE("SNR laws expose the composite rate scale") {
    const linkmodel::Scenario sc = reference_scenario();
    const fading::SnrLaw main_law = linkmodel::main_snr_law(sc);
    const fading::SnrLaw eve_law = linkmodel::eve_snr_law(sc);
    // rate_scale = (K+1)/A for Rician with unit mean power.
    CHECK(rel_err(main_law.rate_scale, 0.2642080812017547) <= 1e-12);
    CHECK(rel_err(eve_law.rate_scale, 1.6708081201754713) <= 1e-12);

    linkmodel::Scenario nak = sc;
    nak.main_fading = fading::FadingSpec::nakagami(2.0);
    nak.eve_fading = fading::FadingSpec::nakagami(2.0);
    CHECK(rel_err(linkmodel::main_snr_law(nak).rate_scale, 0.0880693604005849) <=
          1e-12);
}

TEST_CASE("eavesdropper denominator coupling variants") {
    linkmodel::Scenario sc = reference_scenario();
    sc.eve.rho = 0.5;  // decouple the two splitting factors
    sc.eve_denominator = linkmodel::EveDenominator::AsPrinted;
    const double printed = linkmodel::eve_snr_coefficient(sc);
    CHECK(rel_err(printed,
                  linkmodel::effective_snr_coefficient(sc.eve, sc.main.rho)) <=
          1e-15);
    sc.eve_denominator = linkmodel::EveDenominator::OwnRho;
    const double own = linkmodel::eve_snr_coefficient(sc);
    CHECK(rel_err(own, linkmodel::effective_snr_coefficient(sc.eve, sc.eve.rho)) <=
          1e-15);
    CHECK(printed != own);
    // With equal splitting factors the two readings coincide.
    sc.eve.rho = sc.main.rho;
    sc.eve_denominator = linkmodel::EveDenominator::AsPrinted;
    const double a = linkmodel::eve_snr_coefficient(sc);
    sc.eve_denominator = linkmodel::EveDenominator::OwnRho;
    CHECK(a == linkmodel::eve_snr_coefficient(sc));
}

TEST_CASE("estimation-error interference saturates the SNR at high power") {
    // As Omega -> inf, A -> rho(1-d^2)/(coupling*d^2): the error term
    // scales with Omega and caps the usable SNR.
    linkmodel::LinkBudget link{90.0, 0.8, 0.2, 0.1, 0.0};  // Omega = 1e9
    const double a = linkmodel::effective_snr_coefficient(link, link.rho);
    const double limit =
        link.rho * (1.0 - 0.04) / (link.rho * 0.04);  // = (1-d^2)/d^2 = 24
    CHECK(std::fabs(a - limit) <= 0.01 * limit);
    CHECK(a < limit);  // finite-power value sits below the ceiling
}

TEST_CASE("perfect and useless estimation edge cases") {
    linkmodel::LinkBudget perfect{30.0, 0.8, 0.0, 0.1, 0.0};
    const double a0 = linkmodel::effective_snr_coefficient(perfect, perfect.rho);
    const double expected =
        0.8 * 1000.0 / (0.8 * linkmodel::db_to_linear(0.1) + 1.0);
    CHECK(rel_err(a0, expected) <= 1e-12);

    linkmodel::LinkBudget useless{30.0, 0.8, 1.0, 0.1, 0.0};
    CHECK(linkmodel::effective_snr_coefficient(useless, useless.rho) == 0.0);
    const fading::SnrLaw law = linkmodel::snr_law_from_coefficient(
        fading::FadingSpec::rician(5.0), 0.0);
    CHECK(fading::is_degenerate(law));
}

TEST_CASE("rate scale from coefficient") {
    const fading::SnrLaw rician =
        linkmodel::snr_law_from_coefficient(fading::FadingSpec::rician(5.0), 2.0);
    CHECK(rel_err(rician.rate_scale, 3.0) <= 1e-15);
    const fading::SnrLaw nakagami =
        linkmodel::snr_law_from_coefficient(fading::FadingSpec::nakagami(2.0), 4.0);
    CHECK(rel_err(nakagami.rate_scale, 0.5) <= 1e-15);
    CHECK(fading::is_degenerate(
        linkmodel::snr_law_from_coefficient(fading::FadingSpec::rician(1.0), -3.0)));
}

TEST_CASE("instantaneous SINR reduces to the coefficient at mean error power") {
    std::mt19937_64 rng(13579u);
    std::uniform_real_distribution<double> omega(-10.0, 50.0);
    std::uniform_real_distribution<double> rho(0.05, 1.0);
    std::uniform_real_distribution<double> delta(0.0, 0.95);
    std::uniform_real_distribution<double> noise(-10.0, 10.0);
    std::uniform_real_distribution<double> h(0.01, 5.0);
    for (int i = 0; i < 100; ++i) {
        const linkmodel::LinkBudget link{omega(rng), rho(rng), delta(rng),
                                         noise(rng), noise(rng)};
        const double h_power = h(rng);
        const double direct = linkmodel::simulate_estimation_model(link, h_power, 1.0);
        const double coeff =
            linkmodel::effective_snr_coefficient(link, link.rho) * h_power;
        CHECK(std::fabs(direct - coeff) <= 1e-12 * std::max(1.0, coeff));
    }
    // More error power means less SINR.
    const linkmodel::LinkBudget link{30.0, 0.8, 0.2, 0.1, 0.0};
    CHECK(linkmodel::simulate_estimation_model(link, 1.0, 2.0) <
          linkmodel::simulate_estimation_model(link, 1.0, 1.0));
    CHECK_THROWS_AS(
        (void)linkmodel::simulate_estimation_model(link, -1.0, 1.0),
        std::invalid_argument);
}

TEST_CASE("harvested energy") {
    const linkmodel::LinkBudget link{30.0, 0.8, 0.2, 0.1, 0.0};
    CHECK(rel_err(linkmodel::harvested_energy(link, 0.9), 180.0) <= 1e-12);
    CHECK(linkmodel::harvested_energy(link, 0.0) == 0.0);
    linkmodel::LinkBudget all_info = link;
    all_info.rho = 1.0;
    CHECK(linkmodel::harvested_energy(all_info, 0.9) == 0.0);
    CHECK_THROWS_AS((void)linkmodel::harvested_energy(link, 1.5),
                    std::invalid_argument);
}

TEST_CASE("budget and scenario validation name the offending field") {
    linkmodel::LinkBudget bad{30.0, 1.5, 0.2, 0.1, 0.0};
    CHECK_THROWS_WITH_AS(linkmodel::validate_budget(bad, "main"),
                         "main.rho must lie in [0,1]", std::invalid_argument);
    bad = {30.0, 0.8, -0.2, 0.1, 0.0};
    CHECK_THROWS_WITH_AS(linkmodel::validate_budget(bad, "eve"),
                         "eve.delta must lie in [0,1]", std::invalid_argument);

    linkmodel::Scenario sc = reference_scenario();
    sc.n_eves = 0;
    CHECK_THROWS_AS(linkmodel::validate_scenario(sc), std::invalid_argument);
    sc = reference_scenario();
    sc.zeta = 1.5;
    CHECK_THROWS_AS(linkmodel::validate_scenario(sc), std::invalid_argument);
    sc = reference_scenario();
    sc.integrated_const = 0.0;
    CHECK_THROWS_AS(linkmodel::validate_scenario(sc), std::invalid_argument);
    CHECK_NOTHROW(linkmodel::validate_scenario(reference_scenario()));
}
