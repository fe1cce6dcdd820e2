#pragma once

#include "swiptsec/fading.hpp"

// SWIPT link budget: maps per-link physical parameters (transmit
// power over path loss, power-splitting factor, channel-estimation
// accuracy, noise terms) to the effective SNR law, and computes the
// harvested energy for the secrecy-energy trade-off.

namespace swiptsec::linkmodel {

struct LinkBudget {
    double omega_db = 30.0;  // average transmit power over path loss, dB
    double rho = 0.8;        // power-splitting factor for information decoding
    double delta = 0.2;      // channel accuracy factor (0 perfect, 1 useless)
    double n0_db = 0.1;      // antenna noise power, dB
    double sigma_db = 0.0;   // signal-processing noise power, dB

    double omega_linear() const;
    double n0_linear() const;
    double sigma_linear() const;
};

enum class Receiver { Separated, Integrated };

// Which splitting factor multiplies Omega*delta^2 in the
// eavesdropper's SNR denominator: the main link's (as the source
// equations print it) or the eavesdropper's own.
enum class EveDenominator { AsPrinted, OwnRho };

struct Scenario {
    LinkBudget main{};
    LinkBudget eve{30.0, 0.8, 0.2, 0.1, 0.0};
    fading::FadingSpec main_fading = fading::FadingSpec::rician(5.0);
    fading::FadingSpec eve_fading = fading::FadingSpec::rician(5.0);
    int n_eves = 5;
    Receiver main_arch = Receiver::Separated;
    Receiver eve_arch = Receiver::Separated;
    double integrated_const = 1.0;  // constant C in the integrated-receiver rate log2(C*gamma)
    double zeta = 0.9;              // energy conversion efficiency
    EveDenominator eve_denominator = EveDenominator::AsPrinted;
};

double db_to_linear(double db);

// Throws std::invalid_argument naming the offending field.
void validate_budget(const LinkBudget& link, const char* prefix);
void validate_scenario(const Scenario& scenario);

// Effective SNR coefficient A such that gamma = A * |h|^2:
//   A = rho*Omega*(1-delta^2) / (Omega*coupling_rho*delta^2 + rho*N0 + sigma^2)
// coupling_rho is the splitting factor inside the denominator's first
// term (the link's own rho for the main link; configurable for the
// eavesdropper via EveDenominator).
double effective_snr_coefficient(const LinkBudget& link, double coupling_rho);

// Average harvested power zeta * (1 - rho) * Omega_linear (linear units,
// mean channel power normalized to 1).
double harvested_energy(const LinkBudget& link, double zeta);

// Instantaneous SINR with the estimation-error term treated as
// interference of instantaneous power Omega*rho*delta^2*v_power; at
// v_power = 1 (its mean) this equals
// effective_snr_coefficient(link, rho) * h.
double simulate_estimation_model(const LinkBudget& link, double h_power,
                                 double v_power);

double main_snr_coefficient(const Scenario& scenario);
double eve_snr_coefficient(const Scenario& scenario);

// SNR law for gamma = coefficient * |h|^2; coefficient <= 0 yields the
// degenerate all-mass-at-zero law.
fading::SnrLaw snr_law_from_coefficient(const fading::FadingSpec& spec,
                                        double coefficient);

// SNR law of the main link / of a single eavesdropper (the max over
// n_eves is applied by fading::max_of_n_cdf at the consumer).
fading::SnrLaw main_snr_law(const Scenario& scenario);
fading::SnrLaw eve_snr_law(const Scenario& scenario);

}  // namespace swiptsec::linkmodel
