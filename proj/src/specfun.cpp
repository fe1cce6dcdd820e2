#include "swiptsec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace swiptsec::specfun {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLogMaxDouble = 709.782712893384;  // ln(DBL_MAX)

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(name) + " must be finite");
    }
}

// sin(pi*x) evaluated via argument reduction on x itself; far more
// accurate than sin(pi*x) for large |x|.
double sinpi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    int quadrant_flip = 1;
    if (r >= 1.0) {
        r -= 1.0;
        quadrant_flip = -1;
    }
    if (r > 0.5) r = 1.0 - r;
    return quadrant_flip * std::sin(kPi * r);
}

// Lanczos approximation, g = 7, 9 coefficients. Gives |rel err| below
// ~2e-13 across the real line away from poles.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_sum(double x) {
    double acc = kLanczos[0];
    for (int k = 1; k < 9; ++k) {
        acc += kLanczos[k] / (x - 1.0 + k);
    }
    return acc;
}

double gamma_positive(double x) {
    // x >= 0.5 here.
    const double t = x + 6.5;
    const double a = lanczos_sum(x);
    // The guard must bound the bare power, not the final product: for
    // large x, t^(x-0.5) overflows on its own even when
    // t^(x-0.5) e^{-t} is comfortably representable.
    if ((x - 0.5) * std::log(t) < kLogMaxDouble - 2.0) {
        return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
    }
    // Split the power to stay inside double range near the overflow edge.
    const double half = std::pow(t, (x - 0.5) / 2.0);
    const double r = std::sqrt(2.0 * kPi) * half * std::exp(-t) * half * a;
    if (!std::isfinite(r)) {
        throw std::range_error("gamma_fn overflow");
    }
    return r;
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Regularized lower incomplete gamma by series (x < s+1).
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    const double lg = -x + s * std::log(x) - log_gamma(s);
    return sum * std::exp(lg);
}

// Regularized upper incomplete gamma by Lentz continued fraction
// (x >= s+1).
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double lg = -x + s * std::log(x) - log_gamma(s);
    return std::exp(lg) * h;
}

struct MarcumPair {
    double q;  // Q1(a,b)
    double p;  // 1 - Q1(a,b)
};

// Poisson-weighted incomplete-gamma series:
//   Q1(a,b) = sum_k pois(k; x) * Q(k+1, y),  x = a^2/2, y = b^2/2,
// with the complement accumulated alongside so neither side loses
// accuracy to cancellation. For large x the summation starts at the
// Poisson mode and expands both ways.
MarcumPair marcum_core(double a, double b) {
    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (b == 0.0) return {1.0, 0.0};
    if (a == 0.0) {
        const double p = -std::expm1(-y);
        return {std::exp(-y), p};
    }

    // Poisson pmf at k0 for rate x, upper/lower regularized gamma at
    // (k0+1, y), and the gamma-recurrence term t_k = e^{-y} y^k / k!.
    long k0 = 0;
    double pk, tk, gk, lk;
    if (x > 30.0) {
        k0 = static_cast<long>(std::floor(x));
        pk = std::exp(k0 * std::log(x) - x - log_gamma(static_cast<double>(k0) + 1.0));
        tk = std::exp(k0 * std::log(y) - y - log_gamma(static_cast<double>(k0) + 1.0));
        gk = gamma_q(static_cast<double>(k0) + 1.0, y);
        lk = gamma_p(static_cast<double>(k0) + 1.0, y);
    } else {
        pk = std::exp(-x);
        tk = std::exp(-y);
        gk = tk;  // Q(1,y) = e^{-y}
        lk = -std::expm1(-y);
    }

    double sum_q = 0.0, sum_p = 0.0, pois_mass = 0.0;

    // Downward from k0 (no-op when k0 == 0 beyond the single term).
    {
        double p = pk, t = tk, g = gk, l = lk;
        for (long k = k0; k >= 0; --k) {
            sum_q += p * g;
            sum_p += p * l;
            pois_mass += p;
            if (k == 0 || p < 1e-18) break;
            g -= t;  // Q(k,y) = Q(k+1,y) - t_k
            l += t;
            g = std::clamp(g, 0.0, 1.0);
            l = std::clamp(l, 0.0, 1.0);
            t *= k / y;
            p *= k / x;
        }
    }
    // Upward from k0 + 1.
    {
        double p = pk, t = tk, g = gk, l = lk;
        const long kmax = k0 + 20000;
        for (long k = k0 + 1; k < kmax; ++k) {
            p *= x / k;
            t *= y / k;
            g += t;  // Q(k+1,y) = Q(k,y) + t_k
            l -= t;
            g = std::clamp(g, 0.0, 1.0);
            l = std::clamp(l, 0.0, 1.0);
            sum_q += p * g;
            sum_p += p * l;
            pois_mass += p;
            if (1.0 - pois_mass < 1e-17 && k > x) break;
        }
    }
    // Unreached Poisson tail: Q(k+1,y) -> 1 as k grows, so attribute
    // the remaining mass to the Q side bound; it is < 1e-17 anyway.
    const double rest = std::max(0.0, 1.0 - pois_mass);
    sum_q += rest;
    return {std::clamp(sum_q, 0.0, 1.0), std::clamp(sum_p, 0.0, 1.0)};
}

}  // namespace

double bessel_i0_scaled(double x) {
    require_finite(x, "bessel_i0 argument");
    if (x < 0.0) throw std::domain_error("bessel_i0 requires x >= 0");
    if (x < 21.0) {
        // Power series sum (x/2)^{2k} / (k!)^2.
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x);
    }
    // Asymptotic expansion of e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum a_k,
    // a_0 = 1, a_{k+1} = a_k (2k+1)^2 / (8 x (k+1)).
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double next = term * (2.0 * k + 1.0) * (2.0 * k + 1.0) /
                            (8.0 * x * (k + 1.0));
        if (next >= term) break;  // divergent tail reached
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

double bessel_i0(double x) {
    const double scaled = bessel_i0_scaled(x);
    const double log_value = x + std::log(scaled);
    if (log_value > kLogMaxDouble) {
        throw std::range_error("bessel_i0 overflow at x = " + std::to_string(x));
    }
    return scaled * std::exp(x);
}

double marcum_q1(double a, double b) {
    require_finite(a, "marcum_q1 a");
    require_finite(b, "marcum_q1 b");
    if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q1 requires a, b >= 0");
    return marcum_core(a, b).q;
}

double marcum_q1_complement(double a, double b) {
    require_finite(a, "marcum_q1 a");
    require_finite(b, "marcum_q1 b");
    if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q1 requires a, b >= 0");
    return marcum_core(a, b).p;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
    if (x < 0.5) {
        // log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
        return std::log(kPi / sinpi(x)) - log_gamma(1.0 - x);
    }
    const double t = x + 6.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t +
           std::log(lanczos_sum(x));
}

double gamma_fn(double x) {
    require_finite(x, "gamma_fn argument");
    if (is_nonpositive_integer(x)) {
        throw std::domain_error("gamma_fn pole at x = " + std::to_string(x));
    }
    if (x >= 0.5) return gamma_positive(x);
    // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
    return kPi / (sinpi(x) * gamma_positive(1.0 - x));
}

double gamma_p(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("gamma_p requires s > 0");
    if (x < 0.0) throw std::domain_error("gamma_p requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return std::clamp(gamma_p_series(s, x), 0.0, 1.0);
    return std::clamp(1.0 - gamma_q_cf(s, x), 0.0, 1.0);
}

double gamma_q(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("gamma_q requires s > 0");
    if (x < 0.0) throw std::domain_error("gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return std::clamp(1.0 - gamma_p_series(s, x), 0.0, 1.0);
    return std::clamp(gamma_q_cf(s, x), 0.0, 1.0);
}

double upper_incomplete_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("upper_incomplete_gamma requires s > 0");
    if (x < 0.0) throw std::domain_error("upper_incomplete_gamma requires x >= 0");
    if (x == 0.0) return gamma_fn(s);
    const bool integer_s = (s == std::floor(s)) && s <= 170.0;
    if (integer_s) {
        // (s-1)! e^{-x} sum_{r=0}^{s-1} x^r / r!
        const long n = static_cast<long>(s);
        double term = 1.0, sum = 1.0;
        for (long r = 1; r < n; ++r) {
            term *= x / static_cast<double>(r);
            sum += term;
        }
        return gamma_fn(s) * std::exp(-x) * sum;
    }
    return gamma_fn(s) * gamma_q(s, x);
}

double beta_fn(double p, double q) {
    require_finite(p, "beta_fn p");
    require_finite(q, "beta_fn q");
    if (is_nonpositive_integer(p)) {
        throw std::domain_error("beta_fn pole: first argument is a non-positive integer");
    }
    if (is_nonpositive_integer(q)) {
        throw std::domain_error("beta_fn pole: second argument is a non-positive integer");
    }
    if (is_nonpositive_integer(p + q)) {
        throw std::domain_error("beta_fn pole: argument sum " + std::to_string(p + q) +
                                " is a non-positive integer");
    }
    if (p + q == 1.0) {
        // B(p, 1-p) = pi / sin(pi p); sin(pi p) = sin(pi (1-p)), so
        // evaluate at the smaller argument to keep the result exactly
        // symmetric under argument exchange.
        return kPi / sinpi(std::min(p, q));
    }
    return gamma_fn(p) * gamma_fn(q) / gamma_fn(p + q);
}

MarcumFit fit_marcum_exponential(double a, std::pair<double, double> b_range,
                                 int grid_points) {
    require_finite(a, "fit a");
    if (a < 0.0) throw std::domain_error("fit_marcum_exponential requires a >= 0");
    const double blo = b_range.first, bhi = b_range.second;
    if (!(blo > 0.0) || !(bhi > blo) || !std::isfinite(bhi)) {
        throw std::domain_error("fit_marcum_exponential requires 0 < b_lo < b_hi finite");
    }
    if (grid_points < 32) {
        throw std::domain_error("fit_marcum_exponential requires grid_points >= 32");
    }

    // Weighted least squares on w = ln(-ln Q1) vs u = ln b. The
    // weight (Q1 ln Q1)^2 is |dQ/dw|^2, so minimizing the weighted
    // linearized residual approximates minimizing absolute error in Q.
    double sw = 0.0, su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
    int usable = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double frac = static_cast<double>(i) / (grid_points - 1);
        const double b = blo * std::pow(bhi / blo, frac);
        const double comp = marcum_q1_complement(a, b);
        if (comp <= 0.0 || comp >= 1.0) continue;  // Q1 saturated at this b
        const double neg_log_q = -std::log1p(-comp);  // -ln Q1, cancellation-free
        const double q = 1.0 - comp;
        const double w = q * std::log(q);  // dQ/d(lnlnQ), negative
        const double weight = w * w;
        const double u = std::log(b);
        const double v = std::log(neg_log_q);
        sw += weight;
        su += weight * u;
        sv += weight * v;
        suu += weight * u * u;
        suv += weight * u * v;
        ++usable;
    }
    if (usable < 2) {
        throw std::runtime_error(
            "fit_marcum_exponential: fewer than 2 usable grid points (Q1 saturated "
            "across the range; a = " + std::to_string(a) + ")");
    }
    const double mean_u = su / sw, mean_v = sv / sw;
    const double var_u = suu / sw - mean_u * mean_u;
    const double cov_uv = suv / sw - mean_u * mean_v;
    if (!(var_u > 0.0)) {
        throw std::runtime_error("fit_marcum_exponential: singular normal equations");
    }
    MarcumFit fit;
    fit.a = a;
    fit.mu = cov_uv / var_u;
    fit.nu = mean_v - fit.mu * mean_u;
    fit.b_range = b_range;

    // Verification pass: linear grid, 4x the fit density, endpoints included.
    const int verify_points = 4 * grid_points + 1;
    double max_err = 0.0;
    for (int i = 0; i < verify_points; ++i) {
        const double b = blo + (bhi - blo) * static_cast<double>(i) / (verify_points - 1);
        const double err = std::fabs(marcum_q1(a, b) - marcum_fit_eval(fit, b));
        max_err = std::max(max_err, err);
    }
    fit.max_abs_error = max_err;
    return fit;
}

double marcum_fit_eval(const MarcumFit& fit, double b) {
    if (b < 0.0) throw std::domain_error("marcum_fit_eval requires b >= 0");
    if (b == 0.0) return 1.0;
    return std::exp(-std::exp(fit.nu) * std::pow(b, fit.mu));
}

}  // namespace swiptsec::specfun
