#pragma once

#include <functional>

// Adaptive Gauss-Legendre quadrature with an embedded lower-order
// error estimate. Used by the capacity engines for the semi-infinite
// secrecy integrals and by tests as an independent integration oracle.

namespace swiptsec::quad {

struct QuadratureOptions {
    double rel_tol = 1e-7;
    double abs_tol = 1e-14;
    int max_panels = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimated absolute error
    int panels = 0;
    bool converged = false;
};

// Integrate f over the finite interval [lo, hi]. Panels are bisected
// worst-error-first until the summed error estimate meets
// max(abs_tol, rel_tol * |value|) or max_panels is reached. Endpoints
// are never evaluated (all nodes are interior).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opts = {});

// Integrate f over [lo, infinity) via the substitution
// v = lo + t/(1-t), t in (0,1).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double lo,
                                         const QuadratureOptions& opts = {});

}  // namespace swiptsec::quad
