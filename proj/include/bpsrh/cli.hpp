#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpsrh/bps_structure.hpp"
#include "bpsrh/connection_flatness.hpp"
#include "bpsrh/integral_oracle.hpp"
#include "bpsrh/io.hpp"
#include "bpsrh/lambda_kernel.hpp"
#include "bpsrh/rh_solver.hpp"

namespace bpsrh::cli {

inline std::vector<int> parse_int_vector(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw ParseError("expected a comma-separated integer vector");
    return out;
}

inline std::vector<double> parse_double_vector(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

/// --ray accepts a plain angle in radians or the symbolic form
/// "between g1 and g2", resolved to the clockwise midpoint of the two rays.
inline Ray parse_ray(const std::string& s, const BpsStructure& structure) {
    {
        std::size_t pos = 0;
        try {
            const double a = std::stod(s, &pos);
            if (pos == s.size()) return Ray::from_angle(a);
        } catch (const std::exception&) {
        }
    }
    std::stringstream ss(s);
    std::string kw, v1, kw2, v2;
    ss >> kw >> v1 >> kw2 >> v2;
    if (kw != "between" || kw2 != "and" || v1.empty() || v2.empty())
        throw ParseError("--ray expects an angle or 'between <g1> and <g2>'");
    const auto g1 = parse_int_vector(v1);
    const auto g2 = parse_int_vector(v2);
    if (static_cast<int>(g1.size()) != structure.rank ||
        static_cast<int>(g2.size()) != structure.rank)
        throw ParseError("--ray class vectors must match the structure rank");
    const double a1 = std::arg(z_of(structure, g1));
    const double a2 = std::arg(z_of(structure, g2));
    const double width = wrap_angle_2pi(a1 - a2);
    return Ray::from_angle(a1 - width / 2.0);
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = nullptr;
    std::ostream& get() { return *os; }
    OutputTarget(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os = &fallback;
        } else {
            file.open(path);
            if (!file) throw ParseError("cannot open output file: " + path);
            os = &file;
        }
    }
};

inline std::string gamma_field(const LatticeClass& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(g[i]);
    }
    return out;
}

inline void emit_critical_rows(std::ostream& os, const std::vector<CriticalPoint>& pts) {
    os << "t_re,t_im,gamma,k,order\n";
    for (const auto& p : pts)
        os << format_double(p.location.real()) << ',' << format_double(p.location.imag())
           << ',' << gamma_field(p.gamma) << ',' << p.k << ',' << p.order << "\n";
}

// ---------------------------------------------------------------------------
// check batteries (shared by `bps-rh check` and the test suites)
// ---------------------------------------------------------------------------

inline CheckResult check_lemma31_recurrence(std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-3.0, 3.0), mag(0.5, 20.0),
        ang(-pi + 0.2, pi - 0.2);
    double worst = 0.0;
    int n = 0;
    while (n < 200) {
        const Complex x{box(rng), box(rng)};
        const Complex y = mag(rng) * std::exp(iu * ang(rng));
        const Complex u = x + y;
        if (std::abs(u - std::rint(u.real())) < 0.1 ||
            std::abs(u + 1.0 - std::rint(u.real() + 1.0)) < 0.1)
            continue;
        const Complex lhs = lambda(1.0 + x, y);
        const Complex rhs = (1.0 + x / y) * lambda(x, y);
        worst = std::max(worst, std::abs(lhs / rhs - 1.0));
        ++n;
    }
    return {"lemma31.recurrence", worst < tol, worst, tol, ""};
}

inline CheckResult check_lemma31_reflection(double tol) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Complex x{-0.8 + 0.31 * i, 0.1 + 0.18 * i};
        for (int j = 0; j < 5; ++j) {
            const double m = 0.5 + 19.5 * j / 4.0;
            for (double sgn : {1.0, -1.0}) {
                const Complex y = m * std::exp(iu * (sgn * (0.4 + 0.2 * j)));
                worst = std::max(worst, lambda_reflection_check(x, y));
            }
        }
    }
    return {"lemma31.reflection", worst < tol, worst, tol, ""};
}

inline CheckResult check_lemma31_infinity(double tol) {
    double worst = 0.0;
    for (const Complex x : {Complex{0.0, 0.0}, Complex{0.5, 0.5}, Complex{0.3, -0.4}}) {
        const Complex y = 1e3 * std::exp(iu * (pi / 4.0));
        worst = std::max(worst, std::abs(lambda(x, y) - 1.0));
    }
    return {"lemma31.infinity", worst < tol, worst, tol, ""};
}

inline std::vector<CheckResult> suite_lemma31(const std::map<std::string, double>& tol,
                                              std::uint64_t seed) {
    return {check_lemma31_recurrence(seed, tol.at("lemma31.recurrence")),
            check_lemma31_reflection(tol.at("lemma31.reflection")),
            check_lemma31_infinity(tol.at("lemma31.infinity"))};
}

inline std::vector<CheckResult> suite_thm32(const std::map<std::string, double>& tol) {
    QuadratureSpec spec;
    spec.abs_tol = spec.rel_tol = tol.at("quad.abs");
    const double ims[4] = {pi / 4.0, pi / 2.0, pi, 3.0 * pi / 2.0};
    const Complex ws[5] = {{0, -2}, {0, -5}, {-5, -5}, {-10, -3}, {0, -20}};
    double worst = 0.0;
    for (double im : ims)
        for (Complex w : ws)
            worst = std::max(worst, theorem32_residual(Complex{0.0, im}, w, spec));
    const double t = tol.at("thm32.residual");
    return {{"thm32.residual", worst < t, worst, t, "20-point grid"}};
}

inline std::vector<CheckResult> suite_jumps(const BpsStructure& s, const TorusPoint& xi,
                                            const std::map<std::string, double>& tol) {
    const double t_ = tol.at("jumps.general");
    const auto rays = active_rays(s);
    double worst = 0.0;
    for (const auto& ell : rays) {
        double gap = 2.0 * pi;
        for (const auto& other : rays) {
            const double d = std::abs(wrap_angle(other.angle - ell.angle));
            if (d > ray_tol) gap = std::min(gap, d);
        }
        const double off = std::min(0.3, gap / 3.0);
        const Ray r1 = Ray::from_angle(ell.angle + off);
        const Ray r2 = Ray::from_angle(ell.angle - off);
        for (int j = 0; j < s.rank; ++j) {
            LatticeClass beta(s.rank, 0);
            beta[j] = 1;
            const auto e1 = make_rh_evaluation(s, xi, beta, r1);
            const auto e2 = make_rh_evaluation(s, xi, beta, r2);
            for (double rad : {0.37, 1.1, 2.9}) {
                const Complex t = rad * std::exp(iu * ell.angle);
                worst = std::max(worst, jump_residual(e1, e2, t));
            }
        }
    }
    return {{"jumps.rh1", worst < t_, worst, t_, ""}};
}

inline Ray first_generic_ray(const BpsStructure& s) {
    const auto rays = active_rays(s);
    if (rays.empty()) return Ray::from_angle(0.0);
    if (rays.size() == 1) return Ray::from_angle(rays[0].angle + pi / 2.0);
    double best_gap = -1.0;
    double best = 0.0;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const double a = rays[i].angle;
        const double b = i + 1 < rays.size() ? rays[i + 1].angle : rays[0].angle + 2.0 * pi;
        if (b - a > best_gap) {
            best_gap = b - a;
            best = 0.5 * (a + b);
        }
    }
    return Ray::from_angle(best);
}

inline std::vector<CheckResult> suite_limits(const BpsStructure& s, const TorusPoint& xi,
                                             const std::map<std::string, double>& tol) {
    const double t_ = tol.at("limits.final");
    const Ray r = first_generic_ray(s);
    const std::vector<double> radii{1e-1, 1e-2, 1e-3};
    double worst_final = 0.0;
    bool monotone = true;
    for (int j = 0; j < s.rank; ++j) {
        LatticeClass beta(s.rank, 0);
        beta[j] = 1;
        const auto vals = limit_check(make_rh_evaluation(s, xi, beta, r), radii);
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            if (vals[i + 1] > vals[i] + 1e-15) monotone = false;
        worst_final = std::max(worst_final, vals.back());
    }
    std::vector<CheckResult> out;
    out.push_back({"limits.monotone", monotone, 0.0, 0.0, "|Y-1| decreasing toward 0"});
    out.push_back({"limits.final", worst_final < t_, worst_final, t_, "|t| = 1e-3"});
    return out;
}

inline std::vector<CheckResult> suite_growth(const BpsStructure& s, const TorusPoint& xi,
                                             const std::map<std::string, double>& tol) {
    const double t_ = tol.at("growth.stability");
    const Ray r = first_generic_ray(s);
    double worst = 0.0;
    for (int j = 0; j < s.rank; ++j) {
        LatticeClass beta(s.rank, 0);
        beta[j] = 1;
        const auto e = make_rh_evaluation(s, xi, beta, r);
        const double s1 = growth_check(e, {10, 20, 40, 80});
        const double s2 = growth_check(e, {20, 40, 80, 160});
        const double denom = std::max({std::abs(s1), std::abs(s2), 0.05});
        worst = std::max(worst, std::abs(s1 - s2) / denom);
    }
    return {{"growth.stability", worst < t_, worst, t_, "slope change under radius doubling"}};
}

inline std::optional<BpsStructure> base_of_double(const BpsStructure& s) {
    if (s.rank % 2 != 0) return std::nullopt;
    const int m = s.rank / 2;
    for (int i = 0; i < s.rank; ++i)
        for (int j = 0; j < s.rank; ++j) {
            int expect = 0;
            if (i < m && j >= m) expect = (j - m == i) ? 1 : 0;
            if (i >= m && j < m) expect = (i - m == j) ? -1 : 0;
            if (s.pairing[i][j] != expect) return std::nullopt;
        }
    BpsStructure base;
    base.rank = m;
    base.pairing.assign(m, std::vector<int>(m, 0));
    base.central_charge.assign(s.central_charge.begin(), s.central_charge.begin() + m);
    for (int j = m; j < s.rank; ++j)
        if (std::abs(s.central_charge[j]) > 0.0) return std::nullopt;
    for (const auto& e : s.spectrum) {
        for (int j = m; j < s.rank; ++j)
            if (e.gamma[j] != 0) return std::nullopt;
        base.spectrum.push_back(
            {LatticeClass(e.gamma.begin(), e.gamma.begin() + m), e.omega});
    }
    return base;
}

inline std::vector<CheckResult> suite_flatness(const BpsStructure& s, const TorusPoint& xi,
                                               const std::map<std::string, double>& tol) {
    const double t_ = tol.at("flatness.residual");
    const auto base = base_of_double(s);
    if (!base)
        throw DomainError("flatness suite requires a doubled structure with trivial base pairing");
    const DoubledContext ctx = make_doubled_context(*base, xi);
    const Ray r = first_generic_ray(s);
    double worst = 0.0;
    for (int j = 0; j < base->rank; ++j)
        for (double rad : {0.8, 1.7}) {
            const Complex t = rad * std::exp(iu * r.angle);
            worst = std::max(worst, flatness_residual(ctx, r, j, t, 1e-5));
        }
    // O(h^2) order of the finite-difference residual, measured at a step
    // large enough to stay above roundoff
    const Complex t0 = 1.3 * std::exp(iu * r.angle);
    const double rh = flatness_residual(ctx, r, 0, t0, 2e-3);
    const double rh2 = flatness_residual(ctx, r, 0, t0, 1e-3);
    const double ratio = rh / std::max(rh2, 1e-300);
    std::vector<CheckResult> out;
    out.push_back({"flatness.residual", worst < t_, worst, t_, ""});
    out.push_back({"flatness.h2_order", ratio > 3.0 && ratio < 5.0, ratio, 4.0,
                   "residual ratio under h-halving"});
    return out;
}

// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"finite uncoupled BPS structures: meromorphic Riemann-Hilbert solutions"};
    app.require_subcommand(1);

    std::string structure_path, xi_path, out_path, critical_path, beta_str, ray_str;
    std::string t_list, radii_str, annulus_str, suite = "all", double_out;
    int kmax = 5;
    std::uint64_t seed = 12345;

    auto* validate_cmd = app.add_subcommand("validate", "validate a structure file");
    validate_cmd->add_option("structure", structure_path)->required();

    auto* double_cmd = app.add_subcommand("double", "write the doubled structure");
    double_cmd->add_option("structure", structure_path)->required();
    double_cmd->add_option("output", double_out)->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate Y_{beta,r} on a grid (CSV)");
    eval_cmd->add_option("structure", structure_path)->required();
    eval_cmd->add_option("xi", xi_path)->required();
    eval_cmd->add_option("--beta", beta_str)->required();
    eval_cmd->add_option("--ray", ray_str)->required();
    eval_cmd->add_option("--t", t_list, "explicit grid: re,im;re,im;...");
    eval_cmd->add_option("--radii", radii_str, "radii along --ray");
    eval_cmd->add_option("--annulus", annulus_str, "rmin,rmax,n_radial,n_angular");
    eval_cmd->add_option("--out", out_path);
    eval_cmd->add_option("--critical-out", critical_path);
    eval_cmd->add_option("--kmax", kmax, "sidecar critical-point index bound");

    auto* poles_cmd = app.add_subcommand("poles", "emit critical points for plotting (CSV)");
    poles_cmd->add_option("structure", structure_path)->required();
    poles_cmd->add_option("xi", xi_path)->required();
    poles_cmd->add_option("--beta", beta_str)->required();
    poles_cmd->add_option("--ray", ray_str)->required();
    poles_cmd->add_option("--kmax", kmax)->required();
    poles_cmd->add_option("--out", out_path);

    auto* check_cmd = app.add_subcommand("check", "run a verification suite");
    check_cmd->add_option("structure", structure_path)->required();
    check_cmd->add_option("xi", xi_path)->required();
    check_cmd->add_option("--suite", suite)
        ->check(CLI::IsMember({"lemma31", "thm32", "jumps", "limits", "growth", "flatness", "all"}));
    check_cmd->add_option("--seed", seed);

    try {
        std::vector<const char*> argv;
        argv.push_back("bps-rh");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&started]() {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - started)
            .count();
    };

    try {
        if (validate_cmd->parsed()) {
            const BpsStructure s = load_structure(structure_path);
            const ValidationReport rep = validate(s);
            Report r;
            r.command = "validate " + structure_path;
            r.structure_fingerprint = fingerprint(s);
            for (const auto& item : rep.items)
                r.checks.push_back({item.name, item.pass, 0.0, 0.0, item.detail});
            if (rep.all_pass()) {
                const StructureFlags f = classify(s);
                std::string flags;
                if (f.uncoupled) flags += "uncoupled ";
                if (f.generic) flags += "generic ";
                if (f.integral) flags += "integral ";
                if (f.finite) flags += "finite";
                r.checks.push_back({"classify", true, 0.0, 0.0, flags});
            }
            out << r.to_json().dump(2) << "\n";
            err << "wall_time_ms " << elapsed_ms() << "\n";
            return rep.all_pass() ? 0 : 1;
        }

        if (double_cmd->parsed()) {
            const BpsStructure s = load_structure(structure_path);
            if (!validate(s).all_pass()) {
                err << "input structure fails validation\n";
                return 1;
            }
            save_structure(double_structure(s), double_out);
            err << "wall_time_ms " << elapsed_ms() << "\n";
            return 0;
        }

        const BpsStructure s = load_structure(structure_path);
        bool normalized = false;
        const TorusPoint xi = load_torus_point(xi_path, &normalized);
        if (normalized)
            err << "warning: torus-point imaginary parts normalized into [0, 2pi)\n";

        if (eval_cmd->parsed() || poles_cmd->parsed()) {
            const LatticeClass beta = parse_int_vector(beta_str);
            const Ray ray = parse_ray(ray_str, s);
            const RhEvaluation e = make_rh_evaluation(s, xi, beta, ray);

            if (poles_cmd->parsed()) {
                std::vector<CriticalPoint> pts;
                for (const auto& f : detail::solution_factors(e)) {
                    for (int k = -kmax; k <= kmax; ++k) {
                        const Complex denom = f.theta + two_pi_i * static_cast<double>(k);
                        if (std::abs(denom) <= ray_tol) continue;
                        const Complex loc = f.z / denom;
                        // points landing on the +-i ell_gamma cuts belong to no H_r
                        const double a = wrap_angle(std::arg(loc) - std::arg(f.z));
                        if (std::abs(std::abs(a) - pi / 2.0) <= 1e-9) continue;
                        const int order = static_cast<int>(k >= 0 ? -f.exponent : f.exponent);
                        pts.push_back({loc, f.gamma, k, order});
                    }
                }
                std::sort(pts.begin(), pts.end(),
                          [](const CriticalPoint& a, const CriticalPoint& b) {
                              const double ma = std::abs(a.location), mb = std::abs(b.location);
                              if (ma != mb) return ma < mb;
                              return std::arg(a.location) < std::arg(b.location);
                          });
                OutputTarget target(out_path, out);
                emit_critical_rows(target.get(), pts);
                err << "wall_time_ms " << elapsed_ms() << "\n";
                return 0;
            }

            GridSpec grid;
            if (!t_list.empty()) {
                grid.mode = GridSpec::Mode::list;
                std::stringstream ss(t_list);
                std::string tok;
                while (std::getline(ss, tok, ';')) {
                    const auto parts = parse_double_vector(tok);
                    if (parts.size() != 2) throw ParseError("--t expects re,im;re,im;...");
                    grid.t_values.push_back({parts[0], parts[1]});
                }
            } else if (!radii_str.empty()) {
                grid.mode = GridSpec::Mode::ray_radii;
                grid.ray_angle = ray.angle;
                grid.radii = parse_double_vector(radii_str);
            } else if (!annulus_str.empty()) {
                const auto parts = parse_double_vector(annulus_str);
                if (parts.size() != 4) throw ParseError("--annulus expects rmin,rmax,nr,na");
                grid.mode = GridSpec::Mode::annulus;
                grid.r_min = parts[0];
                grid.r_max = parts[1];
                grid.n_radial = static_cast<int>(parts[2]);
                grid.n_angular = static_cast<int>(parts[3]);
            } else {
                throw ParseError("eval: one of --t, --radii, --annulus is required");
            }

            OutputTarget target(out_path, out);
            target.get() << "t_re,t_im,y_re,y_im,near_critical\n";
            for (Complex t : grid.enumerate()) {
                if (!in_half_plane(t, ray)) continue;
                try {
                    const Complex y = y_solution(e, t);
                    target.get() << format_double(t.real()) << ',' << format_double(t.imag())
                                 << ',' << format_double(y.real()) << ','
                                 << format_double(y.imag()) << ",0\n";
                } catch (const CriticalPointError&) {
                    target.get() << format_double(t.real()) << ',' << format_double(t.imag())
                                 << ",nan,nan,1\n";
                }
            }
            const auto pts = critical_points(e, kmax);
            if (!critical_path.empty()) {
                std::ofstream side(critical_path);
                if (!side) throw ParseError("cannot open sidecar file: " + critical_path);
                emit_critical_rows(side, pts);
            } else if (!out_path.empty()) {
                std::ofstream side(out_path + ".critical.csv");
                emit_critical_rows(side, pts);
            } else {
                target.get() << "# critical-points\n";
                emit_critical_rows(target.get(), pts);
            }
            err << "wall_time_ms " << elapsed_ms() << "\n";
            return 0;
        }

        if (check_cmd->parsed()) {
            const auto tol = tolerance_table();
            Report r;
            r.command = "check --suite " + suite;
            r.structure_fingerprint = fingerprint(s);
            auto extend = [&r](std::vector<CheckResult> v) {
                for (auto& c : v) r.checks.push_back(std::move(c));
            };
            if (suite == "lemma31" || suite == "all") extend(suite_lemma31(tol, seed));
            if (suite == "thm32" || suite == "all") extend(suite_thm32(tol));
            if (suite == "jumps" || suite == "all") extend(suite_jumps(s, xi, tol));
            if (suite == "limits" || suite == "all") extend(suite_limits(s, xi, tol));
            if (suite == "growth" || suite == "all") extend(suite_growth(s, xi, tol));
            if (suite == "flatness" || suite == "all") extend(suite_flatness(s, xi, tol));
            out << r.to_json().dump(2) << "\n";
            if (!r.all_pass()) {
                const CheckResult* worst = nullptr;
                for (const auto& c : r.checks)
                    if (!c.pass && (!worst || c.max_residual / std::max(c.tolerance, 1e-300) >
                                                  worst->max_residual /
                                                      std::max(worst->tolerance, 1e-300)))
                        worst = &c;
                if (worst)
                    err << "worst offender: " << worst->name << " residual "
                        << format_double(worst->max_residual) << " tolerance "
                        << format_double(worst->tolerance) << "\n";
            }
            err << "wall_time_ms " << elapsed_ms() << "\n";
            return r.all_pass() ? 0 : 1;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ActiveRayError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace bpsrh::cli
