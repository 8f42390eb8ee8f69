#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"

namespace bpsrh {

/// Coordinates of a lattice class in the fixed basis gamma_1..gamma_n.
using LatticeClass = std::vector<int>;

inline LatticeClass negate(const LatticeClass& g) {
    LatticeClass out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = -g[i];
    return out;
}

inline LatticeClass add(const LatticeClass& a, const LatticeClass& b) {
    LatticeClass out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline bool is_zero_class(const LatticeClass& g) {
    return std::all_of(g.begin(), g.end(), [](int c) { return c == 0; });
}

struct SpectrumEntry {
    LatticeClass gamma;
    int omega = 0;
};

/// A finite BPS structure: lattice rank, integer skew pairing, central charge
/// on the basis, and the finite symmetric spectrum.
struct BpsStructure {
    int rank = 0;
    std::vector<std::vector<int>> pairing;   // n x n, skew-symmetric
    std::vector<Complex> central_charge;     // Z(gamma_j)
    std::vector<SpectrumEntry> spectrum;     // active classes with Omega != 0
};

/// Direction e^{i angle} R_{>0}; angles canonical in [0, 2*pi).
struct Ray {
    double angle = 0.0;
    static Ray from_angle(double a) { return Ray{wrap_angle_2pi(a)}; }
    Ray antipode() const { return from_angle(angle + pi); }
};

inline constexpr double ray_tol = 1e-12;

inline bool same_ray(const Ray& a, const Ray& b, double tol = ray_tol) {
    return std::abs(wrap_angle(a.angle - b.angle)) <= tol;
}

/// Logarithmic coordinates theta_j of a twisted-torus point; Im theta_j in [0, 2*pi).
struct TorusPoint {
    std::vector<Complex> thetas;
};

struct StructureFlags {
    bool generic = false;
    bool uncoupled = false;
    bool integral = false;
    bool finite = false;
};

struct ValidationItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool all_pass() const {
        return std::all_of(items.begin(), items.end(),
                           [](const ValidationItem& i) { return i.pass; });
    }
};

/// <a, b> under the structure's pairing matrix.
inline long pairing_of(const BpsStructure& s, const LatticeClass& a, const LatticeClass& b) {
    long acc = 0;
    for (int i = 0; i < s.rank; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < s.rank; ++j)
            acc += static_cast<long>(a[i]) * s.pairing[i][j] * b[j];
    }
    return acc;
}

/// Z(g) = sum_j g_j Z(gamma_j).
inline Complex z_of(const BpsStructure& s, const LatticeClass& g) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < s.rank; ++j) acc += static_cast<double>(g[j]) * s.central_charge[j];
    return acc;
}

/// Quadratic refinement sigma(g) = sum_{j<k} g_j g_k <gamma_j, gamma_k>, the
/// fixed section of the twisted sign. Only its parity matters.
inline long sigma_refinement(const BpsStructure& s, const LatticeClass& g) {
    long acc = 0;
    for (int j = 0; j < s.rank; ++j) {
        if (g[j] == 0) continue;
        for (int k = j + 1; k < s.rank; ++k)
            acc += static_cast<long>(g[j]) * g[k] * s.pairing[j][k];
    }
    return acc;
}

/// theta(g) = sum_j g_j theta_j + pi i sigma(g); raw value, no 2*pi*i reduction.
inline Complex theta_of(const BpsStructure& s, const TorusPoint& xi, const LatticeClass& g) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < s.rank; ++j)
        if (g[j] != 0) acc += static_cast<double>(g[j]) * xi.thetas[j];
    const long sig = sigma_refinement(s, g);
    if (sig != 0) acc += Complex{0.0, pi * static_cast<double>(sig)};
    return acc;
}

/// theta(g) with Im reduced into [0, 2*pi); the branch used by solution formulas.
inline Complex theta_normalized(const BpsStructure& s, const TorusPoint& xi, const LatticeClass& g) {
    Complex t = theta_of(s, xi, g);
    const double shift = std::floor(t.imag() / (2.0 * pi));
    return t - two_pi_i * shift;
}

/// xi(g) = exp(theta_of(g)); satisfies xi(a+b) = (-1)^{<a,b>} xi(a) xi(b).
inline Complex torus_eval(const BpsStructure& s, const TorusPoint& xi, const LatticeClass& g) {
    return std::exp(theta_of(s, xi, g));
}

inline ValidationReport validate(const BpsStructure& s) {
    ValidationReport rep;
    auto push = [&rep](std::string name, bool pass, std::string detail = "") {
        rep.items.push_back({std::move(name), pass, std::move(detail)});
    };

    bool shapes = s.rank >= 0 && static_cast<int>(s.pairing.size()) == s.rank &&
                  static_cast<int>(s.central_charge.size()) == s.rank;
    for (const auto& row : s.pairing)
        shapes = shapes && static_cast<int>(row.size()) == s.rank;
    for (const auto& e : s.spectrum)
        shapes = shapes && static_cast<int>(e.gamma.size()) == s.rank;
    push("shape", shapes, shapes ? "" : "dimension mismatch between rank, pairing, charges or spectrum");
    if (!shapes) return rep;

    bool skew = true;
    for (int i = 0; i < s.rank && skew; ++i)
        for (int j = 0; j < s.rank && skew; ++j)
            skew = s.pairing[i][j] == -s.pairing[j][i];
    push("pairing_skew_symmetric", skew, skew ? "" : "pairing[i][j] != -pairing[j][i]");

    bool charges_finite = std::all_of(s.central_charge.begin(), s.central_charge.end(),
                                      [](Complex z) { return is_finite(z); });
    push("central_charge_finite", charges_finite);

    bool no_dup = true;
    for (std::size_t i = 0; i < s.spectrum.size() && no_dup; ++i)
        for (std::size_t j = i + 1; j < s.spectrum.size() && no_dup; ++j)
            no_dup = s.spectrum[i].gamma != s.spectrum[j].gamma;
    push("spectrum_no_duplicates", no_dup);

    bool nonzero_class = true;
    for (const auto& e : s.spectrum)
        if (e.omega != 0 && is_zero_class(e.gamma)) nonzero_class = false;
    push("spectrum_excludes_zero_class", nonzero_class,
         nonzero_class ? "" : "Omega(0) must be absent");

    // Omega(-gamma) = Omega(gamma)
    bool symmetric = true;
    std::string sym_detail;
    for (const auto& e : s.spectrum) {
        if (e.omega == 0) continue;
        const LatticeClass m = negate(e.gamma);
        int om_m = 0;
        for (const auto& f : s.spectrum)
            if (f.gamma == m) om_m = f.omega;
        if (om_m != e.omega) {
            symmetric = false;
            sym_detail = "Omega asymmetric at a spectrum entry";
            break;
        }
    }
    push("spectrum_symmetric", symmetric, sym_detail);

    // Support gap: finite case reduces to Z(gamma) != 0 for active gamma.
    bool gap = true;
    for (const auto& e : s.spectrum)
        if (e.omega != 0 && std::abs(z_of(s, e.gamma)) <= ray_tol) gap = false;
    push("support_gap", gap, gap ? "" : "active class with Z(gamma) = 0");

    return rep;
}

inline std::vector<SpectrumEntry> active_classes(const BpsStructure& s) {
    std::vector<SpectrumEntry> out;
    for (const auto& e : s.spectrum)
        if (e.omega != 0) out.push_back(e);
    return out;
}

inline StructureFlags classify(const BpsStructure& s) {
    StructureFlags f;
    f.integral = true;   // spectrum stores integer Omega by construction
    f.finite = true;     // explicit finite list
    const auto act = active_classes(s);
    f.uncoupled = true;
    for (std::size_t i = 0; i < act.size() && f.uncoupled; ++i)
        for (std::size_t j = i; j < act.size() && f.uncoupled; ++j)
            f.uncoupled = pairing_of(s, act[i].gamma, act[j].gamma) == 0;
    f.generic = true;
    for (std::size_t i = 0; i < act.size() && f.generic; ++i)
        for (std::size_t j = i + 1; j < act.size() && f.generic; ++j) {
            const Complex zi = z_of(s, act[i].gamma), zj = z_of(s, act[j].gamma);
            const double cross = zi.real() * zj.imag() - zi.imag() * zj.real();
            const bool parallel = std::abs(cross) <= ray_tol * std::abs(zi) * std::abs(zj);
            if (parallel && pairing_of(s, act[i].gamma, act[j].gamma) != 0) f.generic = false;
        }
    if (f.uncoupled && !f.generic)
        throw Error("internal: uncoupled structure classified non-generic");
    return f;
}

/// Deduplicated active rays Z(gamma) R_{>0}, sorted by angle.
inline std::vector<Ray> active_rays(const BpsStructure& s) {
    std::vector<Ray> rays;
    for (const auto& e : active_classes(s)) {
        const Ray r = Ray::from_angle(std::arg(z_of(s, e.gamma)));
        bool seen = std::any_of(rays.begin(), rays.end(),
                                [&r](const Ray& q) { return same_ray(q, r); });
        if (!seen) rays.push_back(r);
    }
    std::sort(rays.begin(), rays.end(),
              [](const Ray& a, const Ray& b) { return a.angle < b.angle; });
    return rays;
}

inline bool ray_is_active(const BpsStructure& s, const Ray& r, double tol = ray_tol) {
    for (const auto& e : active_classes(s))
        if (same_ray(Ray::from_angle(std::arg(z_of(s, e.gamma))), r, tol)) return true;
    return false;
}

/// Active classes with Z(gamma) in the upper half-plane extended by the
/// negative real axis: 0 < arg Z(gamma) <= pi.
inline std::vector<LatticeClass> gamma_plus(const BpsStructure& s) {
    std::vector<LatticeClass> out;
    for (const auto& e : active_classes(s)) {
        const double a = std::arg(z_of(s, e.gamma));   // in (-pi, pi]
        if (a > 0.0) out.push_back(e.gamma);
    }
    return out;
}

/// Active classes whose ray lies strictly clockwise within a half-turn of r:
/// 0 < arg(v / Z(gamma)) < pi for v in r.
inline std::vector<LatticeClass> gamma_r_omega(const BpsStructure& s, const Ray& r,
                                               double tol = ray_tol) {
    if (ray_is_active(s, r, tol))
        throw ActiveRayError("gamma_r_omega: ray coincides with an active ray");
    std::vector<LatticeClass> out;
    for (const auto& e : active_classes(s)) {
        const double a = wrap_angle(r.angle - std::arg(z_of(s, e.gamma)));
        if (a > tol && a < pi - tol) out.push_back(e.gamma);
    }
    return out;
}

/// Doubling: lattice Pi + Pi^vee with pairing
/// <(a', v'), (a'', v'')> = <a', a''> + v''(a') - v'(a''),
/// Z extended by zero on Pi^vee and Omega supported on (gamma, 0).
inline BpsStructure double_structure(const BpsStructure& s) {
    BpsStructure d;
    const int n = s.rank;
    d.rank = 2 * n;
    d.pairing.assign(2 * n, std::vector<int>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) d.pairing[i][j] = s.pairing[i][j];
        d.pairing[i][n + i] = 1;    // <gamma_i, gamma_i^vee> = +1
        d.pairing[n + i][i] = -1;
    }
    d.central_charge.assign(2 * n, Complex{0.0, 0.0});
    for (int j = 0; j < n; ++j) d.central_charge[j] = s.central_charge[j];
    for (const auto& e : s.spectrum) {
        LatticeClass g(2 * n, 0);
        for (int j = 0; j < n; ++j) g[j] = e.gamma[j];
        d.spectrum.push_back({std::move(g), e.omega});
    }
    return d;
}

/// Embed a base class g of Pi as (g, <-,g>) in the doubled lattice; such
/// vectors pair to zero with every active class of the double.
inline LatticeClass null_embedding(const BpsStructure& base, const LatticeClass& g) {
    const int n = base.rank;
    LatticeClass out(2 * n, 0);
    for (int j = 0; j < n; ++j) out[j] = g[j];
    for (int j = 0; j < n; ++j) {
        long v = 0;   // <gamma_j, g> under the base pairing
        for (int k = 0; k < n; ++k) v += static_cast<long>(base.pairing[j][k]) * g[k];
        out[n + j] = static_cast<int>(v);
    }
    return out;
}

/// The doubled A1 structure: rank 2, <alpha, alpha^vee> = 1, Z(alpha) = z,
/// Z(alpha^vee) = 0, Omega(+-alpha) = 1.
inline BpsStructure doubled_a1(Complex z) {
    BpsStructure base;
    base.rank = 1;
    base.pairing = {{0}};
    base.central_charge = {z};
    base.spectrum = {{{1}, 1}, {{-1}, 1}};
    return double_structure(base);
}

}  // namespace bpsrh
