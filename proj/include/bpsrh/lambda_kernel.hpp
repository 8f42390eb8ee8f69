#pragma once

#include <cmath>

#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/special_functions.hpp"

namespace bpsrh {

/// Arguments of Lambda_x(y) = Gamma(x+y) e^y / (y^{x+y-1/2} sqrt(2 pi)).
/// The branch selects ln y = Log y + 2 pi i k; the default k = 0 cuts along
/// the negative real axis.
struct LambdaArgs {
    Complex x;
    Complex y;
    BranchSpec branch{};
};

/// Elementary jump factor S(x, y) = 1 - e^x e^y, symmetric in (x, y).
inline Complex s_factor(Complex x, Complex y) { return 1.0 - std::exp(x) * std::exp(y); }

namespace detail {

// Gamma(x+y) has its poles at x+y = -k; report k so callers can enumerate
// critical points symbolically.
inline void check_lambda_pole(Complex x, Complex y, double tol = 1e-12) {
    const Complex w = x + y;
    const double r = std::rint(w.real());
    if (r <= 0.0 && std::abs(w.real() - r) <= tol && std::abs(w.imag()) <= tol)
        throw PoleError("lambda: Gamma(x+y) pole", static_cast<long>(-r));
}

}  // namespace detail

/// ln Lambda_x(y) = ln Gamma(x+y) + y - (x+y-1/2) ln y - ln sqrt(2 pi).
inline Complex log_lambda(const LambdaArgs& a) {
    if (a.y == Complex{0.0, 0.0}) throw ZeroArgument("log_lambda: y = 0");
    detail::check_lambda_pole(a.x, a.y);
    return log_gamma(a.x + a.y) + a.y - (a.x + a.y - 0.5) * log_branch(a.y, a.branch) -
           std::log(sqrt_two_pi);
}

inline Complex log_lambda(Complex x, Complex y, BranchSpec b = {}) {
    return log_lambda(LambdaArgs{x, y, b});
}

/// Lambda_x(y), meromorphic in y for fixed x with poles where x+y is a
/// non-positive integer.
inline Complex lambda(const LambdaArgs& a) { return std::exp(log_lambda(a)); }

inline Complex lambda(Complex x, Complex y, BranchSpec b = {}) {
    return std::exp(log_lambda(x, y, b));
}

/// Residual of the reflection identity
///   Lambda_x(-y) Lambda_{1-x}(y) = S(-2 pi i x, 2 pi i y)^{-1}   (Im y > 0)
///   Lambda_x(-y) Lambda_{1-x}(y) = S(2 pi i x, -2 pi i y)^{-1}   (Im y < 0).
inline double lambda_reflection_check(Complex x, Complex y) {
    if (x.imag() <= 0.0) throw DomainError("lambda_reflection_check: Im x <= 0");
    if (y.imag() == 0.0) throw DomainError("lambda_reflection_check: y real");
    const Complex prod = lambda(x, -y) * lambda(1.0 - x, y);
    const Complex s = y.imag() > 0.0 ? s_factor(-two_pi_i * x, two_pi_i * y)
                                     : s_factor(two_pi_i * x, -two_pi_i * y);
    return std::abs(prod * s - 1.0);
}

/// Truncated asymptotic expansion of ln Lambda_x(y) for y in a convex sector
/// avoiding the negative real axis:
///   sum_{m=1..N} (-1)^{m+1} B_{m+1}(x) / (m (m+1)) y^{-m}.
inline Complex asymptotic_log_lambda(Complex x, Complex y, int n_terms) {
    if (n_terms < 1) throw DomainError("asymptotic_log_lambda: N >= 1 required");
    Complex acc{0.0, 0.0};
    const Complex yinv = 1.0 / y;
    Complex ypow = yinv;
    double sign = 1.0;
    for (int m = 1; m <= n_terms; ++m) {
        acc += sign * bernoulli_poly(m + 1, x) / static_cast<double>(m * (m + 1)) * ypow;
        ypow *= yinv;
        sign = -sign;
    }
    return acc;
}

}  // namespace bpsrh
