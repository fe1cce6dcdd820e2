#include "swiptsec/fading.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swiptsec/specfun.hpp"

namespace swiptsec::fading {

namespace {

void check_mean(double mean_power) {
    if (!(mean_power > 0.0) || !std::isfinite(mean_power)) {
        throw std::invalid_argument("FadingSpec mean_power must be positive and finite");
    }
}

void check_law(const SnrLaw& law) {
    if (std::isnan(law.rate_scale) || law.rate_scale <= 0.0) {
        throw std::invalid_argument("SnrLaw rate_scale must be positive");
    }
}

}  // namespace

FadingSpec FadingSpec::rician(double k, double mean_power) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("Rician k_factor must be finite and >= 0");
    }
    check_mean(mean_power);
    FadingSpec spec;
    spec.family = Family::Rician;
    spec.k_factor = k;
    spec.mean_power = mean_power;
    return spec;
}

FadingSpec FadingSpec::nakagami(double m, double mean_power) {
    if (!(m >= 0.5) || !std::isfinite(m)) {
        throw std::invalid_argument("Nakagami m_shape must be finite and >= 0.5");
    }
    check_mean(mean_power);
    FadingSpec spec;
    spec.family = Family::NakagamiM;
    spec.m_shape = m;
    spec.mean_power = mean_power;
    return spec;
}

bool is_degenerate(const SnrLaw& law) {
    return std::isinf(law.rate_scale);
}

double snr_pdf(const SnrLaw& law, double gamma) {
    check_law(law);
    if (gamma < 0.0) throw std::invalid_argument("snr_pdf requires gamma >= 0");
    if (is_degenerate(law)) return 0.0;  // point mass at zero has no density
    const double s = law.rate_scale;
    if (law.fading.family == Family::Rician) {
        const double k = law.fading.k_factor;
        // s * exp(-(sqrt(s g) - sqrt(K))^2) * i0e(2 sqrt(K s g)):
        // the exponent is always <= 0, so nothing here can overflow.
        const double root = std::sqrt(s * gamma);
        const double diff = root - std::sqrt(k);
        return s * std::exp(-diff * diff) *
               specfun::bessel_i0_scaled(2.0 * std::sqrt(k) * root);
    }
    const double m = law.fading.m_shape;
    if (gamma == 0.0) {
        if (m > 1.0) return 0.0;
        if (m == 1.0) return s;
        return std::numeric_limits<double>::infinity();
    }
    // s^m g^{m-1} e^{-s g} / Gamma(m), assembled in the log domain.
    const double lp = m * std::log(s) + (m - 1.0) * std::log(gamma) - s * gamma -
                      specfun::log_gamma(m);
    return std::exp(lp);
}

double snr_sf(const SnrLaw& law, double gamma) {
    check_law(law);
    if (gamma < 0.0) throw std::invalid_argument("snr_sf requires gamma >= 0");
    if (is_degenerate(law)) return 0.0;  // point mass at zero: P[X > g] = 0
    if (gamma == 0.0) return 1.0;
    const double s = law.rate_scale;
    if (law.fading.family == Family::Rician) {
        const double k = law.fading.k_factor;
        return specfun::marcum_q1(std::sqrt(2.0 * k), std::sqrt(2.0 * s * gamma));
    }
    const double m = law.fading.m_shape;
    const double x = s * gamma;
    if (m == std::floor(m) && m <= 170.0) {
        // e^{-x} sum_{r=0}^{m-1} x^r / r!  (finite-sum survival form)
        double term = 1.0, sum = 1.0;
        const long n = static_cast<long>(m);
        for (long r = 1; r < n; ++r) {
            term *= x / static_cast<double>(r);
            sum += term;
        }
        const double lead = std::exp(-x);
        return lead == 0.0 ? 0.0 : std::min(1.0, lead * sum);
    }
    return specfun::gamma_q(m, x);
}

double snr_cdf(const SnrLaw& law, double gamma) {
    check_law(law);
    if (gamma < 0.0) throw std::invalid_argument("snr_cdf requires gamma >= 0");
    if (is_degenerate(law)) return 1.0;  // point mass at zero: P[X <= g] = 1
    if (gamma == 0.0) return 0.0;
    const double s = law.rate_scale;
    if (law.fading.family == Family::Rician) {
        const double k = law.fading.k_factor;
        return specfun::marcum_q1_complement(std::sqrt(2.0 * k),
                                             std::sqrt(2.0 * s * gamma));
    }
    const double m = law.fading.m_shape;
    if (m == std::floor(m) && m <= 170.0) {
        return 1.0 - snr_sf(law, gamma);
    }
    return specfun::gamma_p(m, s * gamma);
}

double max_of_n_cdf(const SnrLaw& law, int n, double gamma) {
    if (n < 1) throw std::invalid_argument("max_of_n_cdf requires n >= 1");
    if (n == 1) return snr_cdf(law, gamma);
    const double sf = snr_sf(law, gamma);
    if (sf >= 1.0) return 0.0;
    if (sf > 0.5) {
        // Deep lower tail: the direct CDF keeps relative accuracy.
        const double cdf = snr_cdf(law, gamma);
        if (cdf <= 0.0) return 0.0;
        return std::exp(static_cast<double>(n) * std::log(cdf));
    }
    // cdf^n = exp(n * log(1 - sf))
    return std::exp(static_cast<double>(n) * std::log1p(-sf));
}

ChannelSampler::ChannelSampler(const FadingSpec& spec) : spec_(spec) {
    check_mean(spec.mean_power);
    if (spec.family == Family::Rician) {
        const double k = spec.k_factor;
        // |h|^2 as noncentral chi-square with 2 dof: LOS amplitude
        // sqrt(mean*K/(K+1)), per-dimension scatter variance
        // mean/(2(K+1)).
        los_amplitude_ = std::sqrt(spec.mean_power * k / (k + 1.0));
        scatter_sigma_ = std::sqrt(spec.mean_power / (2.0 * (k + 1.0)));
        normal_dist_ = std::normal_distribution<double>(0.0, 1.0);
    } else {
        gamma_dist_ = std::gamma_distribution<double>(
            spec.m_shape, spec.mean_power / spec.m_shape);
    }
}

double ChannelSampler::operator()(std::mt19937_64& rng) {
    if (spec_.family == Family::Rician) {
        const double in_phase = los_amplitude_ + scatter_sigma_ * normal_dist_(rng);
        const double quadrature = scatter_sigma_ * normal_dist_(rng);
        return in_phase * in_phase + quadrature * quadrature;
    }
    return gamma_dist_(rng);
}

std::vector<double> sample_channel_power(const FadingSpec& spec,
                                         std::size_t count,
                                         std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_channel_power requires count >= 1");
    std::mt19937_64 rng(seed);
    ChannelSampler sampler(spec);
    std::vector<double> draws;
    draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        draws.push_back(sampler(rng));
    }
    return draws;
}

}  // namespace swiptsec::fading
