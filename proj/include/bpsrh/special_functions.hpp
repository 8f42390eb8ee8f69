#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"

namespace bpsrh {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients. Good to ~1e-14 relative on
// Re(z) >= 0.5 and stable for |Im z| well beyond 1e3.
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double lanczos_g = 7.0;

// Continuous branch of log(sin(pi z)) on the upper half-plane, matching the
// principal value on (0,1). Conjugate symmetry handles Im z < 0.
inline Complex log_sin_pi(Complex z) {
    if (z.imag() > 0.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
        return -iu * pi * z + Complex{-std::log(2.0), pi / 2.0} +
               clog1p(-std::exp(two_pi_i * z));
    }
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const double s = std::sin(pi * z.real());
    return {std::log(std::abs(s)), s < 0.0 ? pi : 0.0};
}

inline void check_gamma_pole(Complex z, double tol = 1e-12) {
    const double r = std::rint(z.real());
    if (r <= 0.0 && std::abs(z.real() - r) <= tol && std::abs(z.imag()) <= tol)
        throw PoleError("gamma pole at non-positive integer", static_cast<long>(-r));
}

}  // namespace detail

/// Principal branch of ln Gamma(z), continuous on the plane cut along the
/// non-positive real axis; exp(log_gamma(z)) == Gamma(z).
inline Complex log_gamma(Complex z) {
    detail::check_gamma_pole(z);
    if (z.real() >= 0.5) {
        const Complex zm1 = z - 1.0;
        Complex sum{detail::lanczos_c[0], 0.0};
        for (std::size_t i = 1; i < detail::lanczos_c.size(); ++i)
            sum += detail::lanczos_c[i] / (zm1 + static_cast<double>(i));
        const Complex t = zm1 + detail::lanczos_g + 0.5;
        return std::log(sqrt_two_pi) + (zm1 + 0.5) * principal_log(t) - t +
               principal_log(sum);
    }
    // Reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z)
    return std::log(pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
}

/// Gamma(z) = exp(log_gamma(z)).
inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

namespace detail {

// B_{2n} through tangent numbers (Knuth-Buckholtz triangle): every
// intermediate is a positive integer, so there is no cancellation.
//   B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1))
inline const std::vector<double>& bernoulli_cache() {
    static const std::vector<double> cache = [] {
        constexpr int max_n = 64;   // B_0 .. B_128
        std::vector<long double> t(max_n + 1, 0.0L);
        t[1] = 1.0L;
        for (int k = 2; k <= max_n; ++k) t[k] = (k - 1) * t[k - 1];
        for (int k = 2; k <= max_n; ++k)
            for (int j = k; j <= max_n; ++j) t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
        std::vector<double> v(2 * max_n + 1, 0.0);
        v[0] = 1.0;
        v[1] = -0.5;
        for (int n = 1; n <= max_n; ++n) {
            const long double p4 = std::pow(4.0L, n);
            long double b = 2.0L * n * t[n] / (p4 * (p4 - 1.0L));
            if (n % 2 == 0) b = -b;
            v[2 * n] = static_cast<double>(b);
        }
        return v;
    }();
    return cache;
}

}  // namespace detail

/// Bernoulli number B_n (B_1 = -1/2 convention).
inline double bernoulli_number(int n) {
    if (n < 0) throw DomainError("bernoulli_number: n < 0");
    const auto& c = detail::bernoulli_cache();
    if (n >= static_cast<int>(c.size()))
        throw DomainError("bernoulli_number: index beyond the cached range");
    return c[n];
}

/// Bernoulli polynomial B_m(x) = sum_k C(m,k) B_{m-k} x^k, so that
/// B_2(x) = x^2 - x + 1/6.
inline Complex bernoulli_poly(int m, Complex x) {
    if (m < 0) throw DomainError("bernoulli_poly: m < 0");
    long double binom = 1.0L;
    Complex acc{0.0, 0.0};
    Complex xp{1.0, 0.0};
    for (int k = 0; k <= m; ++k) {
        acc += static_cast<double>(binom) * bernoulli_number(m - k) * xp;
        xp *= x;
        binom = binom * (m - k) / (k + 1);
    }
    return acc;
}

inline const double pi_sq_over_6 = pi * pi / 6.0;

namespace detail {

// Power series sum_{k>=1} z^k / k^2 for |z| <= 0.6.
inline Complex dilog_series(Complex z) {
    Complex term = z;
    Complex acc = z;
    for (int k = 2; k < 200; ++k) {
        term *= z;
        const Complex add = term / static_cast<double>(k * k);
        acc += add;
        if (std::abs(add) < 1e-18 * (1.0 + std::abs(acc))) break;
    }
    return acc;
}

// Debye expansion Li2(z) = sum_{n>=0} B_n u^{n+1} / (n+1)!, u = -log(1-z).
// Converges for |u| < 2 pi; used after region reduction where |u| <~ 2.
inline Complex dilog_debye(Complex z) {
    const Complex u = -clog1p(-z);
    const Complex u2 = u * u;
    Complex acc = u - 0.25 * u2;
    Complex upow = u;                 // u^{n+1} for current even n
    long double fact = 1.0L;          // (n+1)! for current even n
    for (int n = 2; n < 80; n += 2) {
        upow *= u2;
        fact *= static_cast<long double>(n) * (n + 1);
        const Complex add = bernoulli_number(n) * upow / static_cast<double>(fact);
        acc += add;
        if (std::abs(add) < 1e-18 * (1.0 + std::abs(acc))) return acc;
    }
    return acc;
}

inline Complex dilog_unit_disk(Complex z) {
    // here |z| <= 1 and z not in [1, inf)
    if (std::abs(z) <= 0.6) return dilog_series(z);
    if (z.real() > 0.5) {
        // Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z)
        const Complex w = 1.0 - z;
        return pi_sq_over_6 - principal_log(z) * principal_log(w) - dilog_unit_disk(w);
    }
    return dilog_debye(z);
}

}  // namespace detail

/// Principal-branch dilogarithm Li2(z) = sum_{k>=1} z^k/k^2 continued to the
/// plane cut along [1, inf). For z on the cut the side flag picks the limit
/// from above (+1) or below (-1); side 0 raises BranchCutError there.
inline Complex dilog(Complex z, int side = 0) {
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        if (std::abs(z.real() - 1.0) < 1e-14) return {pi_sq_over_6, 0.0};
        if (side == 0)
            throw BranchCutError("dilog: z on the branch cut [1, inf) without a side flag");
        // Li2(x +/- i0) = -Li2(1/x) + pi^2/3 - ln^2(x)/2 +/- i pi ln(x)
        const double x = z.real();
        const double lx = std::log(x);
        const Complex inner = dilog(Complex{1.0 / x, 0.0});
        return -inner + Complex{pi * pi / 3.0 - 0.5 * lx * lx, side > 0 ? pi * lx : -pi * lx};
    }
    if (std::abs(z) > 1.0) {
        // Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2
        const Complex lz = principal_log(-z);
        return -detail::dilog_unit_disk(1.0 / z) - pi_sq_over_6 - 0.5 * lz * lz;
    }
    return detail::dilog_unit_disk(z);
}

}  // namespace bpsrh
