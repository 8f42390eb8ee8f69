#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"

namespace bpsrh {

/// Truncation, panel and tolerance parameters for the semi-infinite contour
/// integrals. s_max = 0 requests the per-call tail bound.
struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double s_max = 0.0;
    int panels = 32;
    double singularity_pad = 1e-3;
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double err = 0.0;
};

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
// iteration on P_n from the Chebyshev initial guess.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule make_gauss_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
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
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

inline const GaussRule& gauss12() {
    static const GaussRule r = make_gauss_rule(12);
    return r;
}

inline const GaussRule& gauss24() {
    static const GaussRule r = make_gauss_rule(24);
    return r;
}

template <typename F>
inline Complex gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc;
}

}  // namespace detail

/// Adaptive panel integration of f over [a, b]. Breakpoints seed the initial
/// subdivision; panels are bisected depth-first left to right, so the
/// accumulation order is deterministic for a given spec.
template <typename F>
inline QuadResult integrate_adaptive(const F& f, double a, double b, const QuadratureSpec& spec,
                                     std::vector<double> breakpoints = {}) {
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<std::pair<double, double>> initial;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double lo = std::max(a, breakpoints[i]);
        double hi = std::min(b, breakpoints[i + 1]);
        if (hi - lo > 0.0) initial.push_back({lo, hi});
    }
    // honor the requested minimum panel count
    while (static_cast<int>(initial.size()) < spec.panels) {
        std::size_t widest = 0;
        for (std::size_t i = 1; i < initial.size(); ++i)
            if (initial[i].second - initial[i].first >
                initial[widest].second - initial[widest].first)
                widest = i;
        const auto [lo, hi] = initial[widest];
        if (hi - lo < 1e-14) break;
        const double mid = 0.5 * (lo + hi);
        initial[widest] = {lo, mid};
        initial.insert(initial.begin() + static_cast<long>(widest) + 1, {mid, hi});
    }

    long budget = 200000;
    QuadResult total;
    const double tol_per_len = (spec.abs_tol > 0.0 ? spec.abs_tol : 1e-12) / (b - a);

    std::function<void(double, double, int)> visit = [&](double lo, double hi, int depth) {
        if (--budget < 0) throw ToleranceError("integrate_adaptive: panel budget exhausted");
        const Complex coarse = detail::gauss_panel(f, lo, hi, detail::gauss12());
        const Complex fine = detail::gauss_panel(f, lo, hi, detail::gauss24());
        const double err = std::abs(fine - coarse);
        const double allow =
            std::max(tol_per_len * (hi - lo), spec.rel_tol * std::abs(fine) * 0.1);
        if (err <= allow || depth >= 48 || hi - lo < 1e-15 * (std::abs(lo) + 1.0)) {
            total.value += fine;
            total.err += err;
            return;
        }
        const double mid = 0.5 * (lo + hi);
        visit(lo, mid, depth + 1);
        visit(mid, hi, depth + 1);
    };
    for (const auto& [lo, hi] : initial) visit(lo, hi, 0);
    return total;
}

}  // namespace bpsrh
