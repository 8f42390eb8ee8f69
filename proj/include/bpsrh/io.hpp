#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpsrh/bps_structure.hpp"
#include "bpsrh/complex_ops.hpp"
#include "bpsrh/errors.hpp"

namespace bpsrh {

struct ParseError : Error {
    using Error::Error;
};

/// Shortest 17-significant-digit representation; fixed formatting for
/// byte-identical reports.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json complex_to_json(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json structure_to_json(const BpsStructure& s) {
    nlohmann::json j;
    j["rank"] = s.rank;
    j["pairing"] = s.pairing;
    j["central_charge"] = nlohmann::json::array();
    for (Complex z : s.central_charge) j["central_charge"].push_back(complex_to_json(z));
    j["spectrum"] = nlohmann::json::array();
    for (const auto& e : s.spectrum)
        j["spectrum"].push_back({{"gamma", e.gamma}, {"omega", e.omega}});
    return j;
}

inline BpsStructure structure_from_json(const nlohmann::json& j) {
    try {
        BpsStructure s;
        s.rank = j.at("rank").get<int>();
        s.pairing = j.at("pairing").get<std::vector<std::vector<int>>>();
        for (const auto& z : j.at("central_charge"))
            s.central_charge.push_back(complex_from_json(z));
        for (const auto& e : j.at("spectrum"))
            s.spectrum.push_back(
                {e.at("gamma").get<std::vector<int>>(), e.at("omega").get<int>()});
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("structure file: ") + ex.what());
    }
}

inline BpsStructure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open structure file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("structure file: ") + ex.what());
    }
    return structure_from_json(j);
}

inline void save_structure(const BpsStructure& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << structure_to_json(s).dump(2) << "\n";
}

/// Loads {"theta": [[re, im], ...]}; imaginary parts are normalized into
/// [0, 2 pi). Returns true in *normalized when any entry needed it.
inline TorusPoint load_torus_point(const std::string& path, bool* normalized = nullptr) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open torus-point file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("torus-point file: ") + ex.what());
    }
    TorusPoint p;
    bool fixed = false;
    try {
        for (const auto& t : j.at("theta")) {
            Complex z = complex_from_json(t);
            const double im = wrap_angle_2pi(z.imag());
            if (im != z.imag()) fixed = true;
            p.thetas.push_back({z.real(), im});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("torus-point file: ") + ex.what());
    }
    if (normalized) *normalized = fixed;
    return p;
}

inline void save_torus_point(const TorusPoint& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    nlohmann::json j;
    j["theta"] = nlohmann::json::array();
    for (Complex z : p.thetas) j["theta"].push_back(complex_to_json(z));
    out << j.dump(2) << "\n";
}

/// FNV-1a content hash of the canonical JSON serialization.
inline std::string fingerprint_json(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string fingerprint(const BpsStructure& s) {
    return fingerprint_json(structure_to_json(s));
}

/// Evaluation grid: explicit t list, (ray, radii), or an annulus sweep.
struct GridSpec {
    enum class Mode { list, ray_radii, annulus } mode = Mode::list;
    std::vector<Complex> t_values;
    double ray_angle = 0.0;
    std::vector<double> radii;
    double r_min = 0.0, r_max = 0.0;
    int n_radial = 0, n_angular = 0;

    std::vector<Complex> enumerate() const {
        std::vector<Complex> out;
        switch (mode) {
            case Mode::list:
                out = t_values;
                break;
            case Mode::ray_radii: {
                const Complex dir = std::exp(iu * ray_angle);
                for (double r : radii) out.push_back(r * dir);
                break;
            }
            case Mode::annulus: {
                for (int i = 0; i < n_radial; ++i) {
                    const double r =
                        n_radial == 1
                            ? r_min
                            : r_min * std::pow(r_max / r_min, static_cast<double>(i) /
                                                                  (n_radial - 1));
                    for (int a = 0; a < n_angular; ++a) {
                        const double phi = 2.0 * pi * a / n_angular;
                        out.push_back(r * std::exp(iu * phi));
                    }
                }
                break;
            }
        }
        for (Complex t : out)
            if (std::abs(t) <= 0.0) throw DomainError("grid: |t| must be positive");
        return out;
    }
};

/// Named default tolerances; BPS_RH_TOL may point at a JSON file overriding
/// individual entries.
inline std::map<std::string, double> default_tolerances() {
    return {
        {"lemma31.recurrence", 1e-11}, {"lemma31.reflection", 1e-9},
        {"lemma31.infinity", 1e-3},    {"thm32.residual", 1e-6},
        {"xhat.jump", 1e-6},           {"jumps.a1", 1e-10},
        {"jumps.general", 1e-9},       {"limits.final", 1e-2},
        {"growth.stability", 0.10},    {"flatness.residual", 1e-5},
        {"quad.abs", 1e-9},            {"quad.rel", 1e-9},
    };
}

inline std::map<std::string, double> tolerance_table() {
    auto table = default_tolerances();
    const char* path = std::getenv("BPS_RH_TOL");
    if (path && *path) {
        std::ifstream in(path);
        if (!in) throw ParseError(std::string("BPS_RH_TOL: cannot open ") + path);
        nlohmann::json j;
        try {
            in >> j;
            for (auto it = j.begin(); it != j.end(); ++it)
                table[it.key()] = it.value().get<double>();
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("BPS_RH_TOL: ") + ex.what());
        }
    }
    return table;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

/// Deterministic run report; the wall time goes to stderr, not into the JSON,
/// so identical invocations emit byte-identical documents.
struct Report {
    std::string command;
    std::string structure_fingerprint;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["fingerprint"] = structure_fingerprint;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json e;
            e["name"] = c.name;
            e["status"] = c.pass ? "pass" : "fail";
            e["max_residual"] = format_double(c.max_residual);
            e["tolerance"] = format_double(c.tolerance);
            if (!c.note.empty()) e["note"] = c.note;
            j["checks"].push_back(e);
        }
        return j;
    }
};

}  // namespace bpsrh
