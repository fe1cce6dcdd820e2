#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Probability law of the effective received SNR per link: PDF, CDF,
// survival function, max-of-N order statistics, and channel-power
// sampling for Rician and Nakagami-m fading.

namespace swiptsec::fading {

enum class Family { Rician, NakagamiM };

struct FadingSpec {
    Family family = Family::Rician;
    double k_factor = 0.0;  // Rician LOS-to-scatter power ratio
    double m_shape = 1.0;   // Nakagami shape (>= 0.5)
    double mean_power = 1.0;  // E{|h|^2}

    static FadingSpec rician(double k, double mean_power = 1.0);
    static FadingSpec nakagami(double m, double mean_power = 1.0);
};

// SNR law gamma = A * |h|^2 expressed through the composite
// coefficient rate_scale that multiplies gamma inside the
// exponentials: (K+1)/(A*mean_power) for Rician, m/(A*mean_power)
// for Nakagami. rate_scale = +infinity encodes the degenerate law
// with all probability mass at zero (A = 0).
struct SnrLaw {
    FadingSpec fading;
    double rate_scale = 1.0;
};

bool is_degenerate(const SnrLaw& law);

// Density of the SNR at gamma >= 0.
double snr_pdf(const SnrLaw& law, double gamma);

// CDF; Rician branch is 1 - Q1(sqrt(2K), sqrt(2*rate_scale*gamma))
// via the exact Marcum Q, Nakagami integer-m branch is the finite
// exponential sum, non-integer m uses the regularized lower gamma.
double snr_cdf(const SnrLaw& law, double gamma);

// Survival function 1 - CDF, computed without cancellation.
double snr_sf(const SnrLaw& law, double gamma);

// CDF of the maximum of n i.i.d. draws: snr_cdf^n, exponentiated in
// the log domain to stay accurate for large n and small gamma.
double max_of_n_cdf(const SnrLaw& law, int n, double gamma);

// Value-semantics |h|^2 sampler; independent copies with independent
// RNGs may run on separate threads.
class ChannelSampler {
  public:
    explicit ChannelSampler(const FadingSpec& spec);
    double operator()(std::mt19937_64& rng);

  private:
    FadingSpec spec_;
    double los_amplitude_ = 0.0;  // Rician
    double scatter_sigma_ = 0.0;  // Rician, per quadrature dimension
    std::gamma_distribution<double> gamma_dist_;  // Nakagami
    std::normal_distribution<double> normal_dist_;
};

// count i.i.d. draws of |h|^2 with mean mean_power; deterministic for
// fixed (spec, count, seed).
std::vector<double> sample_channel_power(const FadingSpec& spec,
                                         std::size_t count,
                                         std::uint64_t seed);

}  // namespace swiptsec::fading
