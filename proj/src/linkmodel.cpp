#include "swiptsec/linkmodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace swiptsec::linkmodel {

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

double LinkBudget::omega_linear() const { return db_to_linear(omega_db); }
double LinkBudget::n0_linear() const { return db_to_linear(n0_db); }
double LinkBudget::sigma_linear() const { return db_to_linear(sigma_db); }

void validate_budget(const LinkBudget& link, const char* prefix) {
    auto fail = [&](const char* field, const char* what) {
        throw std::invalid_argument(std::string(prefix) + "." + field + " " + what);
    };
    if (!std::isfinite(link.omega_db)) fail("omega_db", "must be finite");
    if (!std::isfinite(link.n0_db)) fail("n0_db", "must be finite");
    if (!std::isfinite(link.sigma_db)) fail("sigma_db", "must be finite");
    if (!(link.rho >= 0.0 && link.rho <= 1.0)) fail("rho", "must lie in [0,1]");
    if (!(link.delta >= 0.0 && link.delta <= 1.0)) fail("delta", "must lie in [0,1]");
}

void validate_scenario(const Scenario& scenario) {
    validate_budget(scenario.main, "main");
    validate_budget(scenario.eve, "eve");
    if (scenario.n_eves < 1) {
        throw std::invalid_argument("n_eves must be >= 1");
    }
    if (!(scenario.integrated_const > 0.0) || !std::isfinite(scenario.integrated_const)) {
        throw std::invalid_argument("integrated_const must be positive and finite");
    }
    if (!(scenario.zeta >= 0.0 && scenario.zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0,1]");
    }
}

double effective_snr_coefficient(const LinkBudget& link, double coupling_rho) {
    if (!(coupling_rho >= 0.0 && coupling_rho <= 1.0)) {
        throw std::invalid_argument("coupling_rho must lie in [0,1]");
    }
    const double omega = link.omega_linear();
    const double numerator = link.rho * omega * (1.0 - link.delta * link.delta);
    const double denominator = omega * coupling_rho * link.delta * link.delta +
                               link.rho * link.n0_linear() + link.sigma_linear();
    if (denominator <= 0.0) {
        throw std::domain_error("degenerate link budget: zero SNR denominator");
    }
    return numerator / denominator;
}

double harvested_energy(const LinkBudget& link, double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0,1]");
    }
    return zeta * (1.0 - link.rho) * link.omega_linear();
}

double simulate_estimation_model(const LinkBudget& link, double h_power,
                                 double v_power) {
    if (h_power < 0.0 || v_power < 0.0) {
        throw std::invalid_argument("simulate_estimation_model requires non-negative powers");
    }
    const double omega = link.omega_linear();
    const double signal = link.rho * omega * (1.0 - link.delta * link.delta) * h_power;
    const double interference = omega * link.rho * link.delta * link.delta * v_power;
    const double denominator =
        interference + link.rho * link.n0_linear() + link.sigma_linear();
    if (denominator <= 0.0) {
        throw std::domain_error("degenerate link budget: zero SINR denominator");
    }
    return signal / denominator;
}

double main_snr_coefficient(const Scenario& scenario) {
    return effective_snr_coefficient(scenario.main, scenario.main.rho);
}

double eve_snr_coefficient(const Scenario& scenario) {
    const double coupling = scenario.eve_denominator == EveDenominator::AsPrinted
                                ? scenario.main.rho
                                : scenario.eve.rho;
    return effective_snr_coefficient(scenario.eve, coupling);
}

fading::SnrLaw snr_law_from_coefficient(const fading::FadingSpec& spec,
                                        double coefficient) {
    fading::SnrLaw law;
    law.fading = spec;
    if (coefficient <= 0.0) {
        law.rate_scale = std::numeric_limits<double>::infinity();
        return law;
    }
    const double shape = spec.family == fading::Family::Rician
                             ? spec.k_factor + 1.0
                             : spec.m_shape;
    law.rate_scale = shape / (coefficient * spec.mean_power);
    return law;
}

fading::SnrLaw main_snr_law(const Scenario& scenario) {
    validate_scenario(scenario);
    return snr_law_from_coefficient(scenario.main_fading, main_snr_coefficient(scenario));
}

fading::SnrLaw eve_snr_law(const Scenario& scenario) {
    validate_scenario(scenario);
    return snr_law_from_coefficient(scenario.eve_fading, eve_snr_coefficient(scenario));
}

}  // namespace swiptsec::linkmodel
