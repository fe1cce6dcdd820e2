#pragma once

#include <cstddef>
#include <utility>

// Real-valued special functions backing the fading laws and the
// closed-form capacity expressions. All functions are pure and
// thread-safe; errors are reported via std::domain_error /
// std::range_error / std::runtime_error.

namespace swiptsec::specfun {

// Exponential approximation of the first-order Marcum Q function,
//   Q1(a, b) ~= exp(-exp(nu) * b^mu),
// fitted over b in [b_range.first, b_range.second].
struct MarcumFit {
    double a = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    // True maximum of |Q1(a,b) - exp(-e^nu b^mu)| over a dense
    // verification grid spanning b_range (denser than the fit grid).
    double max_abs_error = 0.0;
    std::pair<double, double> b_range{0.0, 0.0};
};

// Modified Bessel function of the first kind, order zero. Requires
// x >= 0; throws std::range_error once I0(x) exceeds double range
// (x > ~713).
double bessel_i0(double x);

// exp(-x) * I0(x); never overflows for x >= 0.
double bessel_i0_scaled(double x);

// First-order Marcum Q function, Q1(a,b) = P[X > b] for X noncentral
// chi with 2 dof and noncentrality a. Absolute error <= 1e-12 range.
double marcum_q1(double a, double b);

// 1 - Q1(a,b), computed without cancellation (accurate when Q1 ~ 1).
double marcum_q1_complement(double a, double b);

// Real gamma function. Poles at non-positive integers throw
// std::domain_error; overflow (x > ~171.6) throws std::range_error.
double gamma_fn(double x);

// log |Gamma(x)| for x > 0.
double log_gamma(double x);

// Regularized incomplete gamma functions, s > 0, x >= 0:
// gamma_p = P(s,x) (lower), gamma_q = Q(s,x) (upper); p + q = 1.
double gamma_p(double s, double x);
double gamma_q(double s, double x);

// Upper incomplete gamma Gamma(s, x), s > 0, x >= 0. Integer s uses
// the finite sum (s-1)! e^{-x} sum_{r<s} x^r/r!.
double upper_incomplete_gamma(double s, double x);

// Beta function B(p,q) = Gamma(p)Gamma(q)/Gamma(p+q), valid for
// negative non-integer arguments via reflection; the complement pair
// B(p, 1-p) uses pi/sin(pi p) directly. Throws std::domain_error when
// p, q, or p+q is a non-positive integer.
double beta_fn(double p, double q);

// Least-squares fit of ln(-ln Q1(a,b)) = nu + mu ln b over a
// log-spaced grid of grid_points points, weighted by the sensitivity
// (Q1 ln Q1)^2 so the linearized objective tracks absolute error in
// Q1. max_abs_error is measured afterwards on a linear grid four
// times as dense. Requires 0 < b_lo < b_hi and grid_points >= 32.
MarcumFit fit_marcum_exponential(double a,
                                 std::pair<double, double> b_range = {0.05, 8.0},
                                 int grid_points = 256);

// Evaluate the fitted form exp(-e^nu * b^mu).
double marcum_fit_eval(const MarcumFit& fit, double b);

}  // namespace swiptsec::specfun
