#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "bpsrh/bps_structure.hpp"
#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/lambda_kernel.hpp"

namespace bpsrh {

/// A zero or pole of a solution: t = Z(gamma)/(theta(gamma) + 2 pi i k).
/// order > 0 is a zero of that order, order < 0 a pole.
struct CriticalPoint {
    Complex location;
    LatticeClass gamma;
    int k = 0;
    int order = 0;
};

struct CriticalPointError : Error {
    CriticalPointError(const std::string& what, CriticalPoint cp)
        : Error(what), point(std::move(cp)) {}
    CriticalPoint point;
};

/// sign<beta,gamma> and the character exponent entering the solution factor.
struct EpsA {
    int eps = 0;
    Complex a{0.0, 0.0};
};

/// Evaluation context: validated finite uncoupled structure, torus point,
/// lattice class beta and a generic ray. theta_branch shifts every normalized
/// theta(gamma) by 2 pi i k, producing the shifted-solution family.
struct RhEvaluation {
    BpsStructure structure;
    TorusPoint xi;
    LatticeClass beta;
    Ray ray;
    int theta_branch = 0;
};

inline RhEvaluation make_rh_evaluation(BpsStructure s, TorusPoint xi, LatticeClass beta,
                                       Ray ray, int theta_branch = 0) {
    if (!validate(s).all_pass()) throw DomainError("rh evaluation: structure fails validation");
    const StructureFlags f = classify(s);
    if (!f.uncoupled) throw DomainError("rh evaluation: structure must be uncoupled");
    if (static_cast<int>(beta.size()) != s.rank)
        throw DomainError("rh evaluation: beta has wrong rank");
    if (static_cast<int>(xi.thetas.size()) != s.rank)
        throw DomainError("rh evaluation: torus point has wrong rank");
    if (ray_is_active(s, ray)) throw ActiveRayError("rh evaluation: ray is active");
    return RhEvaluation{std::move(s), std::move(xi), std::move(beta), ray, theta_branch};
}

inline bool in_half_plane(Complex t, const Ray& r, double tol = ray_tol) {
    if (t == Complex{0.0, 0.0}) return false;
    return std::abs(wrap_angle(std::arg(t) - r.angle)) < pi / 2.0 - tol;
}

/// Stokes factor of an active ray,
///   prod_{Z(gamma) in ell} (1 - xi(gamma) e^{-Z(gamma)/t})^{Omega(gamma) <beta, gamma>},
/// oriented so that Y_{beta, r_ccw} = Y_{beta, r_cw} * stokes_factor across ell.
inline Complex stokes_factor(const BpsStructure& s, const TorusPoint& xi, const Ray& ell,
                             const LatticeClass& beta, Complex t) {
    if (t == Complex{0.0, 0.0}) throw DomainError("stokes_factor: t = 0");
    Complex acc{1.0, 0.0};
    for (const auto& e : active_classes(s)) {
        const Complex z = z_of(s, e.gamma);
        if (!same_ray(Ray::from_angle(std::arg(z)), ell)) continue;
        const long p = e.omega * pairing_of(s, beta, e.gamma);
        if (p == 0) continue;
        const Complex base = 1.0 - torus_eval(s, xi, e.gamma) * std::exp(-z / t);
        if (std::abs(base) < 1e-14 && p < 0)
            throw SFactorZero("stokes_factor: vanishing base with negative exponent");
        acc *= ipow(base, p);
    }
    return acc;
}

/// eps_{(beta,gamma)} = sgn<beta,gamma>, with
/// a = theta(gamma)/2pii for eps = +1 and 1 - theta(gamma)/2pii for eps = -1.
/// eps = 0 means the gamma factor is absent.
inline EpsA eps_a(const BpsStructure& s, const TorusPoint& xi, const LatticeClass& beta,
                  const LatticeClass& gamma) {
    const long p = pairing_of(s, beta, gamma);
    EpsA out;
    if (p == 0) return out;
    const Complex x = theta_normalized(s, xi, gamma) / two_pi_i;
    out.eps = p > 0 ? 1 : -1;
    out.a = p > 0 ? x : 1.0 - x;
    return out;
}

namespace detail {

// The per-class solution factor on H_r for gamma in Gamma_r^Omega is
//   Lambda_{theta(gamma)/2pii}( -Z(gamma) / (2 pi i t) ) ^ {Omega(gamma) <gamma, beta>},
// theta normalized into Im [0, 2pi). Writing the factor through the partner
// class -gamma turns it into the eps/a form of eps_a; the transposed pairing
// in the exponent is what makes the RH1 jumps close (the A1 case then
// reproduces y_plus / y_minus exactly).
//
// The branch-shift family replaces theta(gamma) by theta(gamma) + 2 pi i k on
// the upper-half-plane member of each +-gamma pair and by theta - 2 pi i k on
// the other, keeping theta(gamma) + theta(-gamma) = 2 pi i. That preserves
// every Stokes jump while translating the zero/pole families.
struct SolutionFactor {
    LatticeClass gamma;
    Complex z;
    Complex theta;     // normalized + signed branch shift
    long exponent;     // Omega(gamma) <gamma, beta>
    int branch;        // signed 2 pi i shift applied to this class
};

inline std::vector<SolutionFactor> solution_factors(const RhEvaluation& e) {
    std::vector<SolutionFactor> out;
    for (const auto& g : gamma_r_omega(e.structure, e.ray)) {
        int omega = 0;
        for (const auto& se : e.structure.spectrum)
            if (se.gamma == g) omega = se.omega;
        const long p = omega * (-pairing_of(e.structure, e.beta, g));
        if (p == 0) continue;
        const Complex z = z_of(e.structure, g);
        const int branch = std::arg(z) > 0.0 ? e.theta_branch : -e.theta_branch;
        const Complex th = theta_normalized(e.structure, e.xi, g) +
                           two_pi_i * static_cast<double>(branch);
        out.push_back({g, z, th, p, branch});
    }
    return out;
}

// Distance-based pole guard in t: the factor's Gamma argument is
// u = theta/2pii - Z/(2pii t); |du/dt| = |Z| / (2 pi |t|^2).
inline std::optional<CriticalPoint> near_critical(const SolutionFactor& f, Complex t,
                                                  double rel_tol = 1e-8) {
    const Complex u = f.theta / two_pi_i - f.z / (two_pi_i * t);
    const double n = std::rint(u.real());
    if (n > 0.0) return std::nullopt;
    const double du = std::abs(u - n);
    const double scale = std::abs(f.z) / (2.0 * pi * std::abs(t));
    if (du >= rel_tol * std::max(scale, 1e-300)) return std::nullopt;
    const int k = static_cast<int>(-n);
    CriticalPoint cp;
    cp.location = f.z / (f.theta + two_pi_i * static_cast<double>(k));
    cp.gamma = f.gamma;
    cp.k = k;
    cp.order = static_cast<int>(-f.exponent);
    return cp;
}

}  // namespace detail

/// Minimal solution of the meromorphic RH problem on H_r:
///   Y_{beta,r}(t) = prod_{gamma in Gamma_r^Omega}
///       Lambda_{theta(gamma)/2pii}(-Z(gamma)/(2 pi i t))^{Omega(gamma) <gamma, beta>}.
/// Null beta gives exactly 1 (every exponent vanishes symbolically).
inline Complex y_solution(const RhEvaluation& e, Complex t) {
    if (!in_half_plane(t, e.ray)) throw DomainError("y_solution: t outside H_r");
    Complex log_acc{0.0, 0.0};
    for (const auto& f : detail::solution_factors(e)) {
        if (auto cp = detail::near_critical(f, t))
            throw CriticalPointError("y_solution: t at a critical point", *cp);
        const Complex y = -f.z / (two_pi_i * t);
        log_acc += static_cast<double>(f.exponent) * log_lambda(f.theta / two_pi_i, y);
    }
    return std::exp(log_acc);
}

/// The doubled A1 pair. y_minus solves the problem on half-planes centred on
/// rays clockwise-adjacent to -ell, y_plus on rays clockwise-adjacent to ell;
/// they are glued over C* minus -i ell and +i ell respectively.
inline Complex y_minus(Complex z, Complex theta, Complex t) {
    const Complex x = theta / two_pi_i;
    const Complex y = -z / (two_pi_i * t);
    const Complex u = x + y;
    const double n = std::rint(u.real());
    if (n <= 0.0 && std::abs(u - n) < 1e-10) {
        const int k = static_cast<int>(-n);
        throw CriticalPointError(
            "y_minus: pole", {z / (theta + two_pi_i * static_cast<double>(k)),
                              LatticeClass{1, 0}, k, -1});
    }
    return lambda(x, y);
}

inline Complex y_plus(Complex z, Complex theta, Complex t) {
    const Complex x = 1.0 - theta / two_pi_i;
    const Complex y = z / (two_pi_i * t);
    const Complex u = x + y;
    const double n = std::rint(u.real());
    if (n <= 0.0 && std::abs(u - n) < 1e-10) {
        const int m = static_cast<int>(-n) + 1;
        throw CriticalPointError(
            "y_plus: zero", {z / (theta - two_pi_i * static_cast<double>(m)),
                             LatticeClass{1, 0}, -m, 1});
    }
    return 1.0 / lambda(x, y);
}

/// All zeros/poles of Y_{beta,r} inside H_r with 2 pi i index up to k_max,
/// sorted by modulus then angle. Orders are Omega(gamma) <beta, gamma> per
/// contributing class.
inline std::vector<CriticalPoint> critical_points(const RhEvaluation& e, int k_max = 512) {
    std::vector<CriticalPoint> out;
    for (const auto& f : detail::solution_factors(e)) {
        for (int k = 0; k <= k_max; ++k) {
            const Complex denom = f.theta + two_pi_i * static_cast<double>(k);
            if (std::abs(denom) <= ray_tol) continue;   // theta = 0 degeneracy
            const Complex loc = f.z / denom;
            if (!in_half_plane(loc, e.ray)) continue;
            CriticalPoint cp;
            cp.location = loc;
            cp.gamma = f.gamma;
            cp.k = k + f.branch;
            cp.order = static_cast<int>(-f.exponent);
            out.push_back(std::move(cp));
        }
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        const double ma = std::abs(a.location), mb = std::abs(b.location);
        if (ma != mb) return ma < mb;
        return std::arg(a.location) < std::arg(b.location);
    });
    return out;
}

/// RH1 residual across the convex sector swept clockwise from r1 to r2:
///   | Y_{beta,r1}(t) / ( Y_{beta,r2}(t) prod_{Z(gamma) in sector} S_gamma(t) ) - 1 |.
inline double jump_residual(const RhEvaluation& e1, const RhEvaluation& e2, Complex t) {
    if (!(e1.beta == e2.beta)) throw DomainError("jump_residual: evaluations differ in beta");
    const double width = wrap_angle_2pi(e1.ray.angle - e2.ray.angle);
    if (width <= ray_tol || width >= pi - ray_tol)
        throw SectorError("jump_residual: rays do not bound a convex clockwise sector");
    if (!in_half_plane(t, e1.ray) || !in_half_plane(t, e2.ray))
        throw DomainError("jump_residual: t outside H_{r1} or H_{r2}");
    const Complex y1 = y_solution(e1, t);
    const Complex y2 = y_solution(e2, t);
    Complex jump{1.0, 0.0};
    for (const auto& ell : active_rays(e1.structure)) {
        const double a = wrap_angle_2pi(ell.angle - e2.ray.angle);
        if (a <= ray_tol || a >= width - ray_tol) continue;
        jump *= stokes_factor(e1.structure, e1.xi, ell, e1.beta, t);
    }
    return std::abs(y1 / (y2 * jump) - 1.0);
}

/// |Y(t) - 1| along the evaluation ray at the given radii (RH2 probe).
inline std::vector<double> limit_check(const RhEvaluation& e, const std::vector<double>& radii) {
    std::vector<double> out;
    const Complex dir = std::exp(iu * e.ray.angle);
    for (double r : radii) out.push_back(std::abs(y_solution(e, r * dir) - 1.0));
    return out;
}

/// Least-squares slope of ln|Y| against ln|t| along the evaluation ray
/// (RH3 probe: bounded slope means algebraic growth).
inline double growth_check(const RhEvaluation& e, const std::vector<double>& radii) {
    const Complex dir = std::exp(iu * e.ray.angle);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(radii.size());
    for (double r : radii) {
        const double x = std::log(r);
        const double y = std::log(std::abs(y_solution(e, r * dir)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Winding number of f around a circle, by phase unwrapping over n samples.
template <typename F>
inline double winding_number(const F& f, Complex center, double radius, int n = 256) {
    double total = 0.0;
    Complex prev = f(center + radius);
    for (int j = 1; j <= n; ++j) {
        const Complex t = center + radius * std::exp(two_pi_i * (static_cast<double>(j) / n));
        const Complex cur = f(t);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return total / (2.0 * pi);
}

/// Witness for the failure of the holomorphic (never-vanishing) formulation:
/// the forced zero/pole at t* = Z(gamma)/theta(gamma), certified by an
/// argument-principle count on a small circle around it.
inline CriticalPoint holo_nonexistence_witness(const BpsStructure& s, const TorusPoint& xi,
                                               const LatticeClass& gamma) {
    const Complex th = theta_normalized(s, xi, gamma);
    if (std::abs(th) <= 1e-12) throw HypothesisError("witness: theta(gamma) = 0");
    const Complex z = z_of(s, gamma);
    const Complex t_star = z / th;
    const Ray ell = Ray::from_angle(std::arg(z));
    const double u = wrap_angle(std::arg(t_star) - ell.angle);
    if (std::abs(u) > pi / 2.0 + 1e-9)
        throw HypothesisError("witness: Z(gamma)/theta(gamma) outside the closed half-plane of ell_gamma");

    // beta with <beta, gamma> > 0 (fails for null gamma)
    LatticeClass beta(s.rank, 0);
    long pr = 0;
    for (int j = 0; j < s.rank && pr == 0; ++j) {
        LatticeClass ej(s.rank, 0);
        ej[j] = 1;
        pr = pairing_of(s, ej, gamma);
        if (pr > 0) beta = ej;
        if (pr < 0) beta = negate(ej);
    }
    if (pr == 0) throw HypothesisError("witness: gamma pairs to zero with the whole lattice");

    // generic CCW ray whose half-plane contains t*
    const double lo = std::max(u - pi / 2.0, 0.0);
    const double hi = std::min(u + pi / 2.0, pi);
    if (!(hi - lo > 1e-6)) throw HypothesisError("witness: t* on the domain boundary");
    std::optional<RhEvaluation> ev;
    for (int i = 1; i < 40 && !ev; ++i) {
        const double delta = lo + (hi - lo) * static_cast<double>(i) / 40.0;
        const Ray r = Ray::from_angle(ell.angle + delta);
        if (ray_is_active(s, r, 1e-6)) continue;
        if (!in_half_plane(t_star, r, 1e-6)) continue;
        ev = make_rh_evaluation(s, xi, beta, r);
    }
    if (!ev) throw HypothesisError("witness: no generic half-plane contains t*");

    int omega = 0;
    for (const auto& se : s.spectrum)
        if (se.gamma == gamma) omega = se.omega;
    CriticalPoint cp;
    cp.location = t_star;
    cp.gamma = gamma;
    cp.k = 0;
    cp.order = static_cast<int>(omega * pairing_of(s, beta, gamma));

    const double wind = winding_number(
        [&](Complex t) { return y_solution(*ev, t); }, t_star, 1e-2 * std::abs(t_star));
    if (std::abs(wind - cp.order) > 0.25)
        throw Error("witness: argument-principle count does not certify the declared order");
    return cp;
}

}  // namespace bpsrh
