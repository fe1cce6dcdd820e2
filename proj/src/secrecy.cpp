#include "swiptsec/secrecy.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "swiptsec/detail/format.hpp"
#include "swiptsec/quadrature.hpp"
#include "swiptsec/specfun.hpp"

namespace swiptsec::secrecy {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr std::size_t kChunkSize = 65536;

using detail::format_double;
using fading::SnrLaw;
using linkmodel::Scenario;

double binomial(int n, int z) {
    double c = 1.0;
    for (int j = 1; j <= z; ++j) {
        c *= static_cast<double>(n - z + j) / static_cast<double>(j);
    }
    return c;
}

void require_separated_main(const Scenario& scenario) {
    if (scenario.main_arch != linkmodel::Receiver::Separated) {
        throw std::invalid_argument(
            "unsupported receiver pairing: main link must use the separated design");
    }
}

}  // namespace

const char* engine_name(Engine engine) {
    switch (engine) {
        case Engine::Quadrature: return "quadrature";
        case Engine::ClosedForm: return "closedform";
        case Engine::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

SecrecyEstimate secrecy_quadrature(const Scenario& scenario, double rel_tol) {
    linkmodel::validate_scenario(scenario);
    require_separated_main(scenario);
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");

    SecrecyEstimate est;
    est.engine = Engine::Quadrature;
    est.meta["kernel"] = scenario.eve_arch == linkmodel::Receiver::Separated
                             ? "separated"
                             : "integrated";

    const SnrLaw main_law = linkmodel::main_snr_law(scenario);
    const SnrLaw eve_law = linkmodel::eve_snr_law(scenario);
    const int n = scenario.n_eves;

    if (fading::is_degenerate(main_law)) {
        est.meta["note"] = "degenerate_main_snr";
        return est;  // capacity identically 0
    }

    auto product = [&](double v) {
        const double fe = fading::max_of_n_cdf(eve_law, n, v);
        if (fe == 0.0) return 0.0;
        const double sf = fading::snr_sf(main_law, v);
        if (sf == 0.0) return 0.0;
        return fe * sf;
    };

    quad::QuadratureOptions opts;
    opts.rel_tol = rel_tol;

    if (scenario.eve_arch == linkmodel::Receiver::Separated) {
        auto result = quad::integrate_semi_infinite(
            [&](double v) { return product(v) / (1.0 + v); }, 0.0, opts);
        est.value = result.value / kLn2;
        est.uncertainty = result.abs_error / kLn2;
        est.meta["panels"] = std::to_string(result.panels);
        if (!result.converged) est.meta["flag"] = "quadrature_nonconverged";
        return est;
    }

    // Integrated eavesdropper: kernel 1/(C v). With a degenerate
    // eavesdropper law F_e == 1 the integral diverges at 0.
    const double c = scenario.integrated_const;
    if (fading::is_degenerate(eve_law)) {
        est.value = std::numeric_limits<double>::infinity();
        est.uncertainty = std::numeric_limits<double>::quiet_NaN();
        est.meta["flag"] = "divergent_integral";
        est.meta["note"] = "degenerate_eve_snr_with_integrated_kernel";
        return est;
    }
    // Split at v = 1; substitute v = w^2 on (0,1) to soften the
    // near-zero behaviour (dv/v = 2 dw/w, F_e controls the limit).
    auto near = quad::integrate_adaptive(
        [&](double w) { return 2.0 * product(w * w) / w; }, 0.0, 1.0, opts);
    auto far = quad::integrate_semi_infinite(
        [&](double v) { return product(v) / v; }, 1.0, opts);
    est.value = (near.value + far.value) / (c * kLn2);
    est.uncertainty = (near.abs_error + far.abs_error) / (c * kLn2);
    est.meta["panels"] = std::to_string(near.panels + far.panels);
    if (!near.converged || !far.converged) est.meta["flag"] = "quadrature_nonconverged";
    return est;
}

SecrecyEstimate secrecy_montecarlo(const Scenario& scenario, std::size_t trials,
                                   std::uint64_t seed, unsigned max_threads) {
    linkmodel::validate_scenario(scenario);
    require_separated_main(scenario);
    if (trials < 1000) {
        throw std::invalid_argument("secrecy_montecarlo requires trials >= 1000");
    }

    const double a_main = linkmodel::main_snr_coefficient(scenario);
    const double a_eve = linkmodel::eve_snr_coefficient(scenario);
    const bool integrated_eve = scenario.eve_arch == linkmodel::Receiver::Integrated;
    const double c = scenario.integrated_const;
    const int n_eves = scenario.n_eves;

    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const std::size_t n_chunks = (trials + kChunkSize - 1) / kChunkSize;
    std::vector<Partial> partials(n_chunks);

    auto run_chunk = [&](std::size_t chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk),
                          static_cast<std::uint32_t>(
                              static_cast<std::uint64_t>(chunk) >> 32),
                          0x5eedu};
        std::mt19937_64 rng(seq);
        fading::ChannelSampler main_sampler(scenario.main_fading);
        fading::ChannelSampler eve_sampler(scenario.eve_fading);
        const std::size_t begin = chunk * kChunkSize;
        const std::size_t count = std::min(kChunkSize, trials - begin);
        Partial p;
        for (std::size_t t = 0; t < count; ++t) {
            const double gamma_s = a_main * main_sampler(rng);
            double h_eve = 0.0;
            for (int j = 0; j < n_eves; ++j) {
                h_eve = std::max(h_eve, eve_sampler(rng));
            }
            const double gamma_e = a_eve * h_eve;
            double x;
            if (!integrated_eve) {
                const double diff = std::log2(1.0 + gamma_s) - std::log2(1.0 + gamma_e);
                x = diff > 0.0 ? diff : 0.0;
            } else if (gamma_s <= 0.0) {
                x = 0.0;
            } else if (gamma_e <= 0.0) {
                x = std::numeric_limits<double>::infinity();
            } else {
                const double diff = std::log2(gamma_s / gamma_e) / c;
                x = diff > 0.0 ? diff : 0.0;
            }
            p.sum += x;
            p.sum_sq += x * x;
        }
        partials[chunk] = p;
    };

    unsigned hardware = std::thread::hardware_concurrency();
    if (hardware == 0) hardware = 1;
    unsigned n_threads = max_threads == 0 ? hardware : max_threads;
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, n_chunks));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) run_chunk(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_chunks) return;
                    run_chunk(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Chunk-ordered reduction keeps the result independent of the
    // thread schedule.
    double sum = 0.0, sum_sq = 0.0;
    for (const Partial& p : partials) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double nt = static_cast<double>(trials);
    const double mean = sum / nt;

    SecrecyEstimate est;
    est.engine = Engine::MonteCarlo;
    est.value = mean;
    est.meta["trials"] = std::to_string(trials);
    est.meta["chunk_size"] = std::to_string(kChunkSize);
    if (!std::isfinite(mean)) {
        est.uncertainty = std::numeric_limits<double>::quiet_NaN();
        est.meta["flag"] = "divergent";
        return est;
    }
    const double var = std::max(0.0, (sum_sq - nt * mean * mean) / (nt - 1.0));
    est.uncertainty = std::sqrt(var / nt);
    return est;
}

SecrecyEstimate secrecy_closedform_rician(const Scenario& scenario,
                                          BetaInterpretation beta_interpretation) {
    linkmodel::validate_budget(scenario.main, "main");
    linkmodel::validate_budget(scenario.eve, "eve");
    require_separated_main(scenario);
    if (scenario.n_eves < 0) throw std::invalid_argument("n_eves must be >= 0");
    if (!(scenario.integrated_const > 0.0)) {
        throw std::invalid_argument("integrated_const must be positive");
    }
    if (scenario.main_fading.family != fading::Family::Rician ||
        scenario.eve_fading.family != fading::Family::Rician) {
        throw std::invalid_argument(
            "closed-form engine requires Rician fading on both links");
    }
    const SnrLaw main_law = linkmodel::snr_law_from_coefficient(
        scenario.main_fading, linkmodel::main_snr_coefficient(scenario));
    const SnrLaw eve_law = linkmodel::snr_law_from_coefficient(
        scenario.eve_fading, linkmodel::eve_snr_coefficient(scenario));
    if (fading::is_degenerate(main_law) || fading::is_degenerate(eve_law)) {
        throw std::invalid_argument(
            "closed-form engine requires non-degenerate SNR laws");
    }

    const auto fit_s = specfun::fit_marcum_exponential(
        std::sqrt(2.0 * scenario.main_fading.k_factor));
    const auto fit_e = specfun::fit_marcum_exponential(
        std::sqrt(2.0 * scenario.eve_fading.k_factor));

    SecrecyEstimate est;
    est.engine = Engine::ClosedForm;
    est.meta["beta_interpretation"] = beta_interpretation == BetaInterpretation::AsPrinted
                                          ? "as_printed"
                                          : "complement_pair";
    est.meta["fit_mu_main"] = format_double(fit_s.mu);
    est.meta["fit_nu_main"] = format_double(fit_s.nu);
    est.meta["fit_mu_eve"] = format_double(fit_e.mu);
    est.meta["fit_nu_eve"] = format_double(fit_e.nu);
    est.meta["fit_max_abs_error_main"] = format_double(fit_s.max_abs_error);
    est.meta["fit_max_abs_error_eve"] = format_double(fit_e.max_abs_error);

    // E_k = exp(nu) * (2 * rate_scale)^(mu/2): the fitted Q1 tail
    // evaluated at the law's Marcum argument sqrt(2 s gamma), with the
    // gamma power absorbed by the beta-integral identity.
    const double e_main =
        std::exp(fit_s.nu) * std::pow(2.0 * main_law.rate_scale, fit_s.mu / 2.0);
    const double e_eve =
        std::exp(fit_e.nu) * std::pow(2.0 * eve_law.rate_scale, fit_e.mu / 2.0);

    double beta_main, beta_eve;
    try {
        const double second_s = beta_interpretation == BetaInterpretation::AsPrinted
                                    ? -fit_s.mu / 2.0
                                    : 1.0 - fit_s.mu / 2.0;
        const double second_e = beta_interpretation == BetaInterpretation::AsPrinted
                                    ? -fit_e.mu / 2.0
                                    : 1.0 - fit_e.mu / 2.0;
        beta_eve = specfun::beta_fn(fit_e.mu / 2.0, second_e);
        beta_main = specfun::beta_fn(fit_s.mu / 2.0, second_s);
    } catch (const std::domain_error& e) {
        est.value = std::numeric_limits<double>::quiet_NaN();
        est.uncertainty = std::numeric_limits<double>::quiet_NaN();
        est.meta["flag"] = "beta_pole";
        est.meta["error"] = e.what();
        return est;
    }
    est.meta["beta_main"] = format_double(beta_main);
    est.meta["beta_eve"] = format_double(beta_eve);

    const int n = scenario.n_eves;
    double value = 0.0;
    if (scenario.eve_arch == linkmodel::Receiver::Separated) {
        double sum_eve = 0.0, sum_main = 0.0;
        for (int z = 0; z <= n; ++z) {
            const double coef = binomial(n, z) * (z % 2 == 0 ? 1.0 : -1.0);
            sum_eve += coef * beta_eve * (1.0 - z * e_eve);
            sum_main += coef * beta_main * e_main;
        }
        value = (sum_eve - sum_main) / kLn2;
    } else {
        double sum = 0.0;
        for (int z = 0; z <= n; ++z) {
            const double coef = binomial(n, z) * (z % 2 == 0 ? 1.0 : -1.0);
            sum += coef * (beta_eve * (1.0 - z * e_eve) - e_main * beta_main);
        }
        value = sum / (scenario.integrated_const * kLn2);
    }
    est.value = value;
    est.uncertainty = 0.0;
    return est;
}

SecrecyEstimate secrecy_closedform_nakagami(const Scenario& scenario,
                                            SpInBracket bracket) {
    linkmodel::validate_budget(scenario.main, "main");
    linkmodel::validate_budget(scenario.eve, "eve");
    require_separated_main(scenario);
    if (scenario.n_eves < 0) throw std::invalid_argument("n_eves must be >= 0");
    if (!(scenario.integrated_const > 0.0)) {
        throw std::invalid_argument("integrated_const must be positive");
    }
    if (scenario.main_fading.family != fading::Family::NakagamiM ||
        scenario.eve_fading.family != fading::Family::NakagamiM) {
        throw std::invalid_argument(
            "closed-form engine requires Nakagami fading on both links");
    }
    const double m_main = scenario.main_fading.m_shape;
    const double m_eve = scenario.eve_fading.m_shape;
    if (m_main != std::floor(m_main) || m_eve != std::floor(m_eve)) {
        throw std::invalid_argument(
            "closed-form Nakagami engine requires integer m shape factors");
    }
    const SnrLaw main_law = linkmodel::snr_law_from_coefficient(
        scenario.main_fading, linkmodel::main_snr_coefficient(scenario));
    const SnrLaw eve_law = linkmodel::snr_law_from_coefficient(
        scenario.eve_fading, linkmodel::eve_snr_coefficient(scenario));
    if (fading::is_degenerate(main_law) || fading::is_degenerate(eve_law)) {
        throw std::invalid_argument(
            "closed-form engine requires non-degenerate SNR laws");
    }

    const int n = scenario.n_eves;
    const int ms = static_cast<int>(m_main);
    const int me = static_cast<int>(m_eve);
    // Printed per-link exponential coefficients: the eavesdropper side
    // appears without its m factor, the main side with it.
    const double lambda_eve = eve_law.rate_scale / m_eve;
    const double lambda_main = main_law.rate_scale;

    std::vector<double> factorial(std::max(ms, me));
    factorial[0] = 1.0;
    for (std::size_t i = 1; i < factorial.size(); ++i) {
        factorial[i] = factorial[i - 1] * static_cast<double>(i);
    }

    SecrecyEstimate est;
    est.engine = Engine::ClosedForm;
    // Recorded on both paths; the bracket only enters the
    // integrated-eavesdropper sum below.
    est.meta["bracket_variant"] =
        bracket == SpInBracket::GammaRemoved ? "gamma_removed" : "as_printed";

    if (scenario.eve_arch == linkmodel::Receiver::Separated) {
        // Semi-closed form: triple sum with the inner integral
        //   J(a) = Int_0^inf g^2 e^{-(a*le + lm) g} / (1+g) dg
        // evaluated by the quadrature utility (cached per a).
        std::vector<quad::QuadratureResult> inner(me);
        for (int a = 0; a < me; ++a) {
            const double theta = a * lambda_eve + lambda_main;
            inner[a] = quad::integrate_semi_infinite(
                [theta](double g) {
                    return g * g * std::exp(-theta * g) / (1.0 + g);
                },
                0.0);
        }
        double value = 0.0, err = 0.0;
        bool converged = true;
        for (int z = 0; z <= n; ++z) {
            const double sign = z % 2 == 0 ? 1.0 : -1.0;
            const double bz = binomial(n, z);
            for (int a = 0; a < me; ++a) {
                const double a_pow = std::pow(factorial[a], static_cast<double>(z));
                for (int b = 0; b < ms; ++b) {
                    const double coef = sign * bz / (a_pow * factorial[b]);
                    value += coef * lambda_eve * lambda_main * inner[a].value;
                    err += std::fabs(coef * lambda_eve * lambda_main) *
                           inner[a].abs_error;
                    converged = converged && inner[a].converged;
                }
            }
        }
        est.value = value / kLn2;
        est.uncertainty = err / kLn2;
        if (!converged) est.meta["flag"] = "quadrature_nonconverged";
        return est;
    }

    // Fully closed Sp-In sum. The printed denominator bracket
    // [a*le*g - lm*g] is homogeneous in the stray SNR factor g;
    // GammaRemoved evaluates [a*le - lm], AsPrinted the same bracket
    // with g := 1 (numerically identical, recorded for transparency).
    const double stray = 1.0;
    double value = 0.0;
    for (int z = 0; z <= n; ++z) {
        const double sign = z % 2 == 0 ? 1.0 : -1.0;
        const double bz = binomial(n, z);
        for (int a = 0; a < me; ++a) {
            const double a_pow = std::pow(factorial[a], static_cast<double>(z));
            const double denom_bracket =
                bracket == SpInBracket::GammaRemoved
                    ? a * lambda_eve - lambda_main
                    : a * lambda_eve * stray - lambda_main * stray;
            for (int b = 0; b < ms; ++b) {
                value += sign * bz /
                         (denom_bracket * scenario.integrated_const * a_pow *
                          factorial[b]);
            }
        }
    }
    est.value = value / kLn2;
    est.uncertainty = 0.0;
    return est;
}

}  // namespace swiptsec::secrecy
