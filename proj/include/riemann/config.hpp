#pragma once

// Run configuration shared by the audit and the CLI. Precedence, lowest first:
// built-in defaults, JSON config file, RIEMANN_* environment, command-line flags.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "tolerances.hpp"

namespace riemann {

struct RunConfig {
    std::uint64_t seed = 7;
    std::string curve = "w2z6";
    Tolerances tol;
    double step_tol = 1e-10;

    // Sample counts and horizons used by the audit.
    int field_points = 100;
    int omega_points = 20;
    int flow_starts = 20;
    double flow_time = 2.0;
    int commutator_starts = 20;
    double commutator_time = 0.2;
    int straightening_starts = 20;
    double straightening_time = 0.5;
    int equivariance_samples = 50;
    int coverage_samples = 10000;
    double coverage_radius_edges = 50.0;
    bool timing = false;
};

namespace detail {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

inline double parse_real(const std::string& name, const char* text)
{
    char* end = nullptr;
    const double v = std::strtod(text, &end);
    if (end == text || *end != '\0')
        throw Error(ErrorKind::invalid_input, name + " is not a number: " + text);
    return v;
}

} // namespace detail

inline nlohmann::json config_to_json(const RunConfig& c)
{
    return {
        {"seed", c.seed},
        {"curve", c.curve},
        {"step_tol", c.step_tol},
        {"tolerances",
         {{"surface", c.tol.surface},
          {"root", c.tol.root},
          {"root_merge", c.tol.root_merge},
          {"branch_standoff", c.tol.branch_standoff},
          {"quad", c.tol.quad},
          {"critical_standoff", c.tol.critical_standoff},
          {"drift", c.tol.drift},
          {"sheet_match", c.tol.sheet_match}}},
        {"samples",
         {{"field_points", c.field_points},
          {"omega_points", c.omega_points},
          {"flow_starts", c.flow_starts},
          {"flow_time", c.flow_time},
          {"commutator_starts", c.commutator_starts},
          {"commutator_time", c.commutator_time},
          {"straightening_starts", c.straightening_starts},
          {"straightening_time", c.straightening_time},
          {"equivariance_samples", c.equivariance_samples},
          {"coverage_samples", c.coverage_samples},
          {"coverage_radius_edges", c.coverage_radius_edges}}},
    };
}

/// Overlays the keys present in `j` (same layout as config_to_json) onto `c`.
inline void apply_config_json(RunConfig& c, const nlohmann::json& j)
{
    try {
        detail::read_if(j, "seed", c.seed);
        detail::read_if(j, "curve", c.curve);
        detail::read_if(j, "step_tol", c.step_tol);
        detail::read_if(j, "timing", c.timing);
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            detail::read_if(t, "surface", c.tol.surface);
            detail::read_if(t, "root", c.tol.root);
            detail::read_if(t, "root_merge", c.tol.root_merge);
            detail::read_if(t, "branch_standoff", c.tol.branch_standoff);
            detail::read_if(t, "quad", c.tol.quad);
            detail::read_if(t, "critical_standoff", c.tol.critical_standoff);
            detail::read_if(t, "drift", c.tol.drift);
            detail::read_if(t, "sheet_match", c.tol.sheet_match);
        }
        if (j.contains("samples")) {
            const auto& s = j.at("samples");
            detail::read_if(s, "field_points", c.field_points);
            detail::read_if(s, "omega_points", c.omega_points);
            detail::read_if(s, "flow_starts", c.flow_starts);
            detail::read_if(s, "flow_time", c.flow_time);
            detail::read_if(s, "commutator_starts", c.commutator_starts);
            detail::read_if(s, "commutator_time", c.commutator_time);
            detail::read_if(s, "straightening_starts", c.straightening_starts);
            detail::read_if(s, "straightening_time", c.straightening_time);
            detail::read_if(s, "equivariance_samples", c.equivariance_samples);
            detail::read_if(s, "coverage_samples", c.coverage_samples);
            detail::read_if(s, "coverage_radius_edges", c.coverage_radius_edges);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::invalid_input, std::string("bad config value: ") + e.what());
    }
}

inline void load_config_file(RunConfig& c, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::invalid_input, "cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::invalid_input, "config file is not JSON: " + std::string(e.what()));
    }
    apply_config_json(c, j);
}

/// RIEMANN_SEED, RIEMANN_CURVE, RIEMANN_STEP_TOL and RIEMANN_<NAME>_TOL for
/// each tolerance (SURFACE, ROOT, ROOT_MERGE, BRANCH_STANDOFF, QUAD,
/// CRITICAL_STANDOFF, DRIFT, SHEET_MATCH).
inline void apply_environment(RunConfig& c)
{
    auto real = [](const char* name, double& out) {
        if (const char* v = std::getenv(name))
            out = detail::parse_real(name, v);
    };
    if (const char* v = std::getenv("RIEMANN_SEED")) {
        char* end = nullptr;
        const unsigned long long seed = std::strtoull(v, &end, 10);
        if (end == v || *end != '\0')
            throw Error(ErrorKind::invalid_input, std::string("RIEMANN_SEED is not an integer: ") + v);
        c.seed = seed;
    }
    if (const char* v = std::getenv("RIEMANN_CURVE"))
        c.curve = v;
    real("RIEMANN_STEP_TOL", c.step_tol);
    real("RIEMANN_SURFACE_TOL", c.tol.surface);
    real("RIEMANN_ROOT_TOL", c.tol.root);
    real("RIEMANN_ROOT_MERGE_TOL", c.tol.root_merge);
    real("RIEMANN_BRANCH_STANDOFF_TOL", c.tol.branch_standoff);
    real("RIEMANN_QUAD_TOL", c.tol.quad);
    real("RIEMANN_CRITICAL_STANDOFF_TOL", c.tol.critical_standoff);
    real("RIEMANN_DRIFT_TOL", c.tol.drift);
    real("RIEMANN_SHEET_MATCH_TOL", c.tol.sheet_match);
}

} // namespace riemann
