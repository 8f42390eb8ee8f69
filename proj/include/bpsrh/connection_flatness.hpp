#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "bpsrh/bps_structure.hpp"
#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/rh_solver.hpp"
#include "bpsrh/special_functions.hpp"

namespace bpsrh {

/// A rank-m base structure with trivial pairing together with its double and
/// a torus point on the doubled torus (coordinates theta_j, theta_j^vee).
struct DoubledContext {
    BpsStructure base;
    BpsStructure doubled;
    TorusPoint xi;
};

inline DoubledContext make_doubled_context(BpsStructure base, TorusPoint xi) {
    if (!validate(base).all_pass())
        throw DomainError("doubled context: base structure fails validation");
    for (int i = 0; i < base.rank; ++i)
        for (int j = 0; j < base.rank; ++j)
            if (base.pairing[i][j] != 0)
                throw DomainError("doubled context: base pairing must be trivial");
    BpsStructure dbl = double_structure(base);
    if (static_cast<int>(xi.thetas.size()) != dbl.rank)
        throw DomainError("doubled context: torus point must have doubled rank");
    return DoubledContext{std::move(base), std::move(dbl), std::move(xi)};
}

/// Components of a tangent vector on the doubled torus.
struct TangentVector {
    std::vector<Complex> d_theta;
    std::vector<Complex> d_theta_dual;
};

namespace detail {

inline LatticeClass embed_base(const DoubledContext& c, const LatticeClass& g) {
    LatticeClass out(c.doubled.rank, 0);
    for (int j = 0; j < c.base.rank; ++j) out[j] = g[j];
    return out;
}

}  // namespace detail

/// Generating function of the invariants,
///   F_Omega = (1/2 pi i) sum_{gamma active} Omega(gamma) Li2(xi(gamma)).
inline Complex f_omega(const DoubledContext& c, int side = 0) {
    Complex acc{0.0, 0.0};
    for (const auto& e : active_classes(c.base)) {
        const Complex x = torus_eval(c.doubled, c.xi, detail::embed_base(c, e.gamma));
        acc += static_cast<double>(e.omega) * dilog(x, side);
    }
    return acc / two_pi_i;
}

/// Closed form of F_Omega through the second Bernoulli polynomial:
///   -sum_{gamma in Gamma^+_Omega} Omega(gamma) (theta(gamma)^2/4pii - theta(gamma)/2 + 1/12).
/// Agrees with f_omega up to an additive constant independent of theta.
inline Complex f_omega_closed(const DoubledContext& c) {
    Complex acc{0.0, 0.0};
    for (const auto& g : gamma_plus(c.base)) {
        int omega = 0;
        for (const auto& e : c.base.spectrum)
            if (e.gamma == g) omega = e.omega;
        const Complex th = theta_normalized(c.doubled, c.xi, detail::embed_base(c, g));
        acc -= static_cast<double>(omega) *
               (th * th / (2.0 * two_pi_i) - 0.5 * th + 1.0 / 12.0);
    }
    return acc;
}

/// Hamiltonian vector field of F_Omega for the symplectic form
/// -sum dtheta_j ^ dtheta_j^vee: components (-dF/dtheta^vee, +dF/dtheta).
/// F depends only on base coordinates, so d_theta vanishes and
///   d_theta_dual_j = dF/dtheta_j = -(1/2pii) sum_{Gamma^+} Omega(gamma) gamma^(j) (theta(gamma) - pi i).
inline TangentVector hamiltonian_field(const DoubledContext& c) {
    const int m = c.base.rank;
    TangentVector v;
    v.d_theta.assign(m, Complex{0.0, 0.0});
    v.d_theta_dual.assign(m, Complex{0.0, 0.0});
    for (const auto& g : gamma_plus(c.base)) {
        int omega = 0;
        for (const auto& e : c.base.spectrum)
            if (e.gamma == g) omega = e.omega;
        const Complex th = theta_normalized(c.doubled, c.xi, detail::embed_base(c, g));
        for (int j = 0; j < m; ++j)
            v.d_theta_dual[j] -=
                static_cast<double>(omega * g[j]) * (th - pi * iu) / two_pi_i;
    }
    return v;
}

namespace detail {

// d/dt log f by a central log-ratio stencil; safe against branch wraps
// because the ratio stays near 1 for small h.
template <typename F>
inline Complex log_derivative(const F& f, Complex at, double h) {
    return principal_log(f(at + h) / f(at - h)) / (2.0 * h);
}

}  // namespace detail

namespace detail {

// Reject t within a stencil radius of the A1 zero/pole families; a central
// difference straddling a pole would otherwise return a junk residual
// instead of an error.
inline void guard_a1_stencil(Complex z, Complex theta, Complex t, double h) {
    const double radius = 10.0 * h * std::max(1.0, std::abs(t));
    const Complex c_minus = (z / t - theta) / two_pi_i;   // pole index of Y_-
    const long k = std::lround(c_minus.real());
    if (k >= 0) {
        const Complex loc = z / (theta + two_pi_i * static_cast<double>(k));
        if (std::abs(t - loc) < radius)
            throw CriticalPointError("gradx: t within the difference stencil of a pole",
                                     {loc, LatticeClass{1, 0}, static_cast<int>(k), -1});
    }
    const Complex c_plus = (theta - z / t) / two_pi_i;    // zero index of Y_+
    const long m = std::lround(c_plus.real());
    if (m >= 1) {
        const Complex loc = z / (theta - two_pi_i * static_cast<double>(m));
        if (std::abs(t - loc) < radius)
            throw CriticalPointError("gradx: t within the difference stencil of a zero",
                                     {loc, LatticeClass{1, 0}, static_cast<int>(-m), 1});
    }
}

}  // namespace detail

/// Residual of the A1 gradient identity
///   t d/dt log Y_pm - (z/t) d/dtheta log Y_pm = (1/2pii)(theta - pi i),
/// checked for both y_plus and y_minus by central differences (returns the
/// larger of the two residuals).
inline double gradx_residual_a1(Complex z, Complex theta, Complex t, double h) {
    detail::guard_a1_stencil(z, theta, t, h);
    const Complex rhs = (theta - pi * iu) / two_pi_i;
    double worst = 0.0;
    for (int which = 0; which < 2; ++which) {
        auto yf = [&](Complex tt, Complex th) {
            return which == 0 ? y_minus(z, th, tt) : y_plus(z, th, tt);
        };
        const Complex dt = detail::log_derivative(
            [&](Complex tt) { return yf(tt, theta); }, t, h);
        const Complex dth = detail::log_derivative(
            [&](Complex th) { return yf(t, th); }, theta, h);
        worst = std::max(worst, std::abs(t * dt - (z / t) * dth - rhs));
    }
    return worst;
}

namespace detail {

inline Complex flatness_lhs(const DoubledContext& c, const Ray& r, const LatticeClass& beta,
                            Complex t, double h) {
    const int m = c.base.rank;
    const auto y_at = [&](Complex tt, const TorusPoint& pt) {
        RhEvaluation e = make_rh_evaluation(c.doubled, pt, beta, r);
        return y_solution(e, tt);
    };
    Complex lhs = t * log_derivative([&](Complex tt) { return y_at(tt, c.xi); }, t, h);
    for (int k = 0; k < m; ++k) {
        const Complex zk = c.base.central_charge[k];
        if (zk == Complex{0.0, 0.0}) continue;
        TorusPoint up = c.xi, dn = c.xi;
        up.thetas[k] += h;
        dn.thetas[k] -= h;
        const Complex dth = principal_log(y_at(t, up) / y_at(t, dn)) / (2.0 * h);
        lhs -= zk / t * dth;
    }
    return lhs;
}

}  // namespace detail

/// Residual of the generalized flatness identity for beta = gamma_j^vee
/// (j zero-based):
///   t d/dt log Y - sum_k (z_k/t) d/dtheta_k log Y
///     = (1/2pii) sum_{gamma in Gamma_r^Omega} gamma^(j) Omega(gamma) (theta(gamma) - pi i),
/// all derivatives by central differences with step h. The right side equals
/// -dF_Omega/dtheta_j, which is the flat-section equation of
///   nabla = d - (Z/t^2 - Ham_{F_Omega}/t) dt.
inline double flatness_residual(const DoubledContext& c, const Ray& r, int j, Complex t,
                                double h) {
    const int m = c.base.rank;
    if (j < 0 || j >= m) throw DomainError("flatness_residual: bad dual index");
    LatticeClass beta(c.doubled.rank, 0);
    beta[m + j] = 1;
    const Complex lhs = detail::flatness_lhs(c, r, beta, t, h);
    Complex rhs{0.0, 0.0};
    for (const auto& g : gamma_r_omega(c.doubled, r)) {
        int omega = 0;
        for (const auto& e : c.doubled.spectrum)
            if (e.gamma == g) omega = e.omega;
        const Complex th = theta_normalized(c.doubled, c.xi, g);
        rhs += static_cast<double>(g[j] * omega) * (th - pi * iu) / two_pi_i;
    }
    return std::abs(lhs - rhs);
}

/// Residuals of the flat-section equation under the two candidate signs of
/// the Hamiltonian term: first = nabla with -Ham_F/t (passes), second =
/// nabla with +Ham_F/t (the variant stated alongside it; fails).
inline std::pair<double, double> connection_sign_residuals(const DoubledContext& c, const Ray& r,
                                                           int j, Complex t, double h) {
    const int m = c.base.rank;
    if (j < 0 || j >= m) throw DomainError("connection_sign_residuals: bad dual index");
    LatticeClass beta(c.doubled.rank, 0);
    beta[m + j] = 1;
    const Complex lhs = detail::flatness_lhs(c, r, beta, t, h);
    const Complex df = hamiltonian_field(c).d_theta_dual[j];
    return {std::abs(lhs + df), std::abs(lhs - df)};
}

}  // namespace bpsrh
