#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "bpsrh/errors.hpp"

namespace bpsrh {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr Complex iu{0.0, 1.0};
inline const Complex two_pi_i{0.0, 2.0 * pi};
inline const double sqrt_two_pi = std::sqrt(2.0 * pi);

/// Selects a branch of the complex logarithm: log_k(z) = Log(z) + 2*pi*i*k,
/// where Log is the principal branch with Im in (-pi, pi].
struct BranchSpec {
    int k = 0;
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Principal complex logarithm with the half-open convention Im in (-pi, pi].
inline Complex principal_log(Complex z) {
    if (z == Complex{0.0, 0.0}) throw ZeroArgument("principal_log: z = 0");
    Complex w = std::log(z);
    if (w.imag() == -pi) w = Complex{w.real(), pi};
    return w;
}

/// log_k(z) = principal log + 2*pi*i*k.
inline Complex log_branch(Complex z, BranchSpec b = {}) {
    return principal_log(z) + two_pi_i * static_cast<double>(b.k);
}

/// z^a on the branch b: exp(a * log_branch(z, b)).
inline Complex cpow(Complex z, Complex a, BranchSpec b = {}) {
    return std::exp(a * log_branch(z, b));
}

/// exp(z) - 1 without cancellation for small |z|.
inline Complex cexpm1(Complex z) {
    if (std::abs(z) > 0.5) return std::exp(z) - 1.0;
    // exp(x+iy)-1 = expm1(x) + e^x (cos y - 1) + i e^x sin y, all stable pieces
    const double ex = std::exp(z.real());
    const double em1 = std::expm1(z.real());
    const double y = z.imag();
    const double cm1 = -2.0 * std::sin(y / 2.0) * std::sin(y / 2.0);
    return {em1 + ex * cm1, ex * std::sin(y)};
}

/// log(1+z), accurate for small |z|.
inline Complex clog1p(Complex z) {
    const double az = std::abs(z);
    if (az > 0.5) return principal_log(1.0 + z);
    if (az == 0.0) return {0.0, 0.0};
    // |z| small: 1+z stays clear of the cut, use log1p on modulus + exact angle
    const double x = z.real(), y = z.imag();
    const double lm = 0.5 * std::log1p(2.0 * x + (x * x + y * y));
    return {lm, std::atan2(y, 1.0 + x)};
}

/// Integer power by repeated squaring (branch-free, exact sign handling).
inline Complex ipow(Complex z, long n) {
    if (n == 0) return {1.0, 0.0};
    bool inv = n < 0;
    unsigned long m = inv ? static_cast<unsigned long>(-(n + 1)) + 1ul : static_cast<unsigned long>(n);
    Complex acc{1.0, 0.0};
    Complex base = z;
    while (m != 0) {
        if (m & 1ul) acc *= base;
        base *= base;
        m >>= 1;
    }
    return inv ? 1.0 / acc : acc;
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * pi);
    if (a == -pi) a = pi;
    return a;
}

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle_2pi(double a) {
    double w = std::fmod(a, 2.0 * pi);
    if (w < 0.0) w += 2.0 * pi;
    if (w == 2.0 * pi) w = 0.0;
    return w;
}

}  // namespace bpsrh
