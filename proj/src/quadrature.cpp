#include "swiptsec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace swiptsec::quad {

namespace {

struct Rule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// recurrence; accurate to machine precision for the small n used here.
Rule gauss_legendre(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.141592653589793238462643383279502884;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const Rule& rule15() {
    static const Rule r = gauss_legendre(15);
    return r;
}
const Rule& rule7() {
    static const Rule r = gauss_legendre(7);
    return r;
}

struct Panel {
    double lo, hi, value, err;
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double v15 = 0.0;
    const Rule& r15 = rule15();
    for (int i = 0; i < 15; ++i) {
        v15 += r15.weights[i] * f(mid + half * r15.nodes[i]);
    }
    v15 *= half;
    double v7 = 0.0;
    const Rule& r7 = rule7();
    for (int i = 0; i < 7; ++i) {
        v7 += r7.weights[i] * f(mid + half * r7.nodes[i]);
    }
    v7 *= half;
    return {lo, hi, v15, std::fabs(v15 - v7)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opts) {
    if (!(lo < hi)) throw std::invalid_argument("integrate_adaptive requires lo < hi");

    auto worse = [](const Panel& a, const Panel& b) { return a.err < b.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

    const int initial = 8;
    std::vector<Panel> done;
    double total_value = 0.0, total_err = 0.0;
    auto push = [&](const Panel& p) {
        total_value += p.value;
        total_err += p.err;
        heap.push(p);
    };
    for (int i = 0; i < initial; ++i) {
        const double a = lo + (hi - lo) * static_cast<double>(i) / initial;
        const double b = lo + (hi - lo) * static_cast<double>(i + 1) / initial;
        push(evaluate_panel(f, a, b));
    }
    int panels = initial;

    while (panels < opts.max_panels) {
        if (total_err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total_value))) {
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        total_value -= worst.value;
        total_err -= worst.err;
        // A panel whose own error is already negligible cannot help;
        // park it and stop (remaining error is below resolution).
        if (worst.err <= opts.abs_tol / opts.max_panels) {
            done.push_back(worst);
            total_value += worst.value;
            total_err += worst.err;
            break;
        }
        const double mid = 0.5 * (worst.lo + worst.hi);
        push(evaluate_panel(f, worst.lo, mid));
        push(evaluate_panel(f, mid, worst.hi));
        ++panels;
    }

    // Deterministic final accumulation in interval order.
    std::vector<Panel> all = std::move(done);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    QuadratureResult result;
    for (const Panel& p : all) {
        result.value += p.value;
        result.abs_error += p.err;
    }
    result.panels = panels;
    result.converged =
        result.abs_error <=
        std::max(opts.abs_tol, opts.rel_tol * std::fabs(result.value)) * 1.0000001;
    return result;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double lo,
                                         const QuadratureOptions& opts) {
    auto mapped = [&f, lo](double t) {
        const double om = 1.0 - t;
        const double v = lo + t / om;
        if (!std::isfinite(v)) return 0.0;
        const double fv = f(v);
        if (fv == 0.0) return 0.0;
        return fv / (om * om);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, opts);
}

}  // namespace swiptsec::quad
