#pragma once

// Claim registry and batch evaluation. Asserted claims compare one metric
// against a tolerance (PASS when metric <= tolerance); contested claims only
// report what was computed (VALUE). An evaluator that throws yields ERROR.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelian_map.hpp"
#include "config.hpp"
#include "continuation.hpp"
#include "curve.hpp"
#include "flow.hpp"
#include "io.hpp"
#include "sampling.hpp"
#include "tiling.hpp"

namespace riemann::audit {

using nlohmann::json;

enum class Kind { asserted, contested };
enum class Verdict { pass, fail, value, error };

inline const char* to_string(Kind k) { return k == Kind::asserted ? "asserted" : "contested"; }

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::value: return "VALUE";
    case Verdict::error: return "ERROR";
    }
    return "?";
}

struct Evidence {
    double metric = 0.0;
    int samples = 0;
    json values = json::object();
};

struct Context {
    const RunConfig& config;
    const Curve& curve;
    const SheetTracker& tracker;
    std::mt19937_64 rng;
};

struct Claim {
    std::string id;
    std::string statement;
    Kind kind;
    double tolerance; // asserted only
    std::function<Evidence(Context&)> evaluate;
};

struct ClaimResult {
    std::string id;
    std::string statement;
    Kind kind;
    double tolerance;
    Verdict verdict;
    Evidence evidence;
    std::string error;
    double seconds = 0.0;
};

struct AuditReport {
    json document;
    std::vector<ClaimResult> results;

    /// Asserted claims that failed or could not be evaluated.
    int asserted_failures() const
    {
        int n = 0;
        for (const auto& r : results)
            n += r.kind == Kind::asserted && (r.verdict == Verdict::fail || r.verdict == Verdict::error);
        return n;
    }
};

namespace detail {

constexpr double pi = constants::pi;

inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Independent stream per claim so adding or reordering claims leaves the
/// others' samples unchanged.
inline std::mt19937_64 claim_rng(std::uint64_t seed, const std::string& id)
{
    const std::uint64_t h = fnv1a(id);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

inline double infinity() { return std::numeric_limits<double>::infinity(); }

inline SurfacePoint sample_point(Context& ctx, double radius = 1.2)
{
    return random_surface_point(ctx.tracker, ctx.rng, radius, ctx.config.tol.branch_standoff);
}

inline double beta_reference() { return std::tgamma(1.0 / 6) * std::tgamma(0.5) / std::tgamma(2.0 / 3) / 6.0; }

inline double max_diff(const RealTangent& a, const RealTangent& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Runs `body` on `count` flow starts drawn inside |z| <= 0.9. A start whose
/// trace hits the precision horizon (near-singularity abort) is replaced, at
/// most `count` times in total.
template <class Body>
int for_flow_starts(Context& ctx, int count, Body body)
{
    int done = 0, replaced = 0;
    while (done < count) {
        const SurfacePoint start = sample_point(ctx, 0.9);
        try {
            if (body(start))
                ++done;
        } catch (const FlowError& e) {
            if (e.kind() != ErrorKind::near_singularity || ++replaced > count)
                throw;
        }
    }
    return replaced;
}

inline bool branch_free(const SheetTracker& tracker, const FlowTrace& trace)
{
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        if (tracker.segment_clearance(trace.samples[i - 1].point.z, trace.samples[i].point.z) <
            tracker.tolerances().branch_standoff)
            return false;
    return true;
}

/// Cycle lengths of a permutation.
inline std::vector<int> cycle_lengths(const std::vector<int>& perm)
{
    std::vector<int> out;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i])
            continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
            seen[j] = true;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

inline double min_spacing(const std::vector<cplx>& pts, cplx p)
{
    double d = infinity();
    for (cplx q : pts)
        if (q != p)
            d = std::min(d, std::abs(q - p));
    return d;
}

/// Branch values ordered by argument, so neighbours in the list are adjacent.
inline std::vector<cplx> ordered_branch_values(const SheetTracker& tracker)
{
    std::vector<cplx> v = tracker.branch_values();
    sort_by_argument(v);
    return v;
}

/// Closed loop around the branch values a and b, starting at the loop point
/// nearest the origin, with w continued there from (0, sheet 0).
inline ZPath loop_around_pair(const SheetTracker& tracker, cplx a, cplx b, int sides = 96)
{
    const cplx center = 0.5 * (a + b);
    const double radius = 0.5 * std::abs(a - b) + 0.4 * std::abs(a - b);
    const double phase = std::arg(-center);
    std::vector<cplx> loop;
    for (int j = 0; j <= sides; ++j)
        loop.push_back(center + std::polar(radius, phase + 2.0 * pi * (j % sides) / sides));
    const cplx w0 = tracker.labeled_fiber(0.0).front();
    const cplx w_start = tracker.continue_w({{0.0, loop.front()}, w0}).w_end;
    return {loop, w_start};
}

inline json lattice_json(const HexLayout& layout, cplx p)
{
    const auto [a, b] = layout.lattice_coords(p);
    const double off = std::max(std::abs(a - std::round(a)), std::abs(b - std::round(b)));
    return {{"edge", layout.edge()}, {"coords", {a, b}}, {"distance_to_integer", off}};
}

// ---- asserted: vector fields -------------------------------------------------

inline Evidence field_u_embedding(Context& ctx)
{
    Evidence ev;
    for (int i = 0; i < ctx.config.field_points; ++i) {
        const SurfacePoint p = sample_point(ctx);
        ev.metric = std::max(ev.metric, max_diff(real_hamiltonian(ctx.curve, p, RealPart::u),
                                                 embed(hamiltonian_field(ctx.curve, p.z, p.w))));
    }
    ev.samples = ctx.config.field_points;
    ev.values["max_abs_difference"] = ev.metric;
    return ev;
}

inline Evidence field_v_global_sign(Context& ctx)
{
    Evidence ev;
    int sign = 0;
    bool consistent = true;
    for (int i = 0; i < ctx.config.field_points; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const int s = imaginary_field_sign(ctx.curve, p);
        if (sign == 0)
            sign = s;
        consistent = consistent && s == sign;
        const ComplexField f = hamiltonian_field(ctx.curve, p.z, p.w);
        RealTangent expect = embed({cplx(0, 1) * f.dz, cplx(0, 1) * f.dw});
        for (double& x : expect)
            x *= sign;
        ev.metric = std::max(ev.metric, max_diff(real_hamiltonian(ctx.curve, p, RealPart::v), expect));
    }
    if (!consistent)
        ev.metric = infinity();
    ev.samples = ctx.config.field_points;
    ev.values = {{"global_sign", sign}, {"sign_constant", consistent}, {"max_abs_difference", ev.metric}};
    return ev;
}

inline Evidence field_tangency(Context& ctx)
{
    Evidence ev;
    const int n = 10 * ctx.config.field_points;
    for (int i = 0; i < n; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const Partials d = partials(ctx.curve, p.z, p.w);
        const ComplexField f = hamiltonian_field(ctx.curve, p.z, p.w);
        ev.metric = std::max(ev.metric, std::abs(d.fz * f.dz + d.fw * f.dw));
    }
    ev.samples = n;
    ev.values["max_abs_dF_of_field"] = ev.metric;
    return ev;
}

inline Evidence poisson_zero(Context& ctx)
{
    Evidence ev;
    for (int i = 0; i < ctx.config.field_points; ++i)
        ev.metric = std::max(ev.metric, std::abs(poisson_bracket(ctx.curve, sample_point(ctx))));
    ev.samples = ctx.config.field_points;
    ev.values["max_abs_bracket"] = ev.metric;
    return ev;
}

inline Evidence fields_independent(Context& ctx)
{
    Evidence ev;
    double worst = infinity();
    int dependent = 0;
    for (int i = 0; i < ctx.config.field_points; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const RealTangent xu = real_hamiltonian(ctx.curve, p, RealPart::u);
        const RealTangent xv = real_hamiltonian(ctx.curve, p, RealPart::v);
        double norm = 0.0;
        for (std::size_t k = 0; k < 4; ++k)
            norm += xu[k] * xu[k] + xv[k] * xv[k];
        norm = std::sqrt(norm);
        const double margin = independence_margin(xu, xv);
        worst = std::min(worst, margin / norm);
        dependent += !(margin > 1e-9 * norm);
    }
    ev.metric = dependent;
    ev.samples = ctx.config.field_points;
    ev.values = {{"dependent_points", dependent}, {"min_relative_singular_value", worst}};
    return ev;
}

// ---- asserted: flows ---------------------------------------------------------

inline Evidence flow_conservation(Context& ctx)
{
    Evidence ev;
    json drifts = json::array();
    const int replaced = for_flow_starts(ctx, ctx.config.flow_starts, [&](const SurfacePoint& start) {
        const FlowTrace trace =
            integrate_flow(ctx.curve, start, 1.0, ctx.config.flow_time, ctx.config.step_tol, ctx.config.tol);
        ev.metric = std::max(ev.metric, trace.max_drift);
        drifts.push_back(trace.max_drift);
        return true;
    });
    ev.samples = ctx.config.flow_starts;
    ev.values = {{"max_drift", ev.metric}, {"per_start_drift", drifts}, {"replaced_starts", replaced},
                 {"t_end", ctx.config.flow_time}};
    return ev;
}

inline Evidence flow_commutator(Context& ctx)
{
    Evidence ev;
    const double t = ctx.config.commutator_time;
    const int replaced = for_flow_starts(ctx, ctx.config.commutator_starts, [&](const SurfacePoint& start) {
        ev.metric = std::max(ev.metric, commutator_defect(ctx.curve, start, t, t, ctx.config.step_tol, ctx.config.tol));
        return true;
    });
    ev.samples = ctx.config.commutator_starts;
    ev.values = {{"max_defect", ev.metric}, {"s", t}, {"t", t}, {"replaced_starts", replaced}};
    return ev;
}

inline Evidence flow_straightening(Context& ctx)
{
    Evidence ev;
    int skipped = 0;
    const int replaced = for_flow_starts(ctx, ctx.config.straightening_starts, [&](const SurfacePoint& start) {
        const FlowTrace trace =
            integrate_flow(ctx.curve, start, 1.0, ctx.config.straightening_time, ctx.config.step_tol, ctx.config.tol);
        if (!branch_free(ctx.tracker, trace)) {
            if (++skipped > 10 * ctx.config.straightening_starts)
                throw Error(ErrorKind::resolution_failure, "too few branch-free traces");
            return false;
        }
        const double r = straightening_residual(ctx.tracker, trace, sheet_path(ctx.tracker, start));
        ev.metric = std::max(ev.metric, r);
        return true;
    });
    ev.samples = ctx.config.straightening_starts;
    ev.values = {{"max_residual", ev.metric},
                 {"t_end", ctx.config.straightening_time},
                 {"skipped_not_branch_free", skipped},
                 {"replaced_starts", replaced}};
    return ev;
}

// ---- asserted: critical and branch data ---------------------------------------

inline Evidence regular_value(Context& ctx)
{
    const RegularityReport r = is_regular_value(ctx.curve, ctx.config.tol);
    Evidence ev;
    json pts = json::array();
    for (const auto& c : r.critical_points)
        pts.push_back({{"z", io::to_json(c.z)}, {"w", io::to_json(c.w)}, {"value", io::to_json(c.value)}});
    const bool origin_only = r.critical_points.size() == 1 && std::abs(r.critical_points[0].z) <= 1e-12 &&
                             std::abs(r.critical_points[0].w) <= 1e-12;
    ev.metric = (r.regular ? 0 : 1) + (origin_only ? 0 : 1);
    ev.samples = 1;
    ev.values = {{"regular", r.regular}, {"critical_points", pts}};
    return ev;
}

inline Evidence branch_point_positions(Context& ctx)
{
    const BranchData b = branch_points(ctx.curve, ctx.config.tol);
    Evidence ev;
    json pts = json::array();
    for (const auto& p : b.points) {
        double nearest = infinity();
        for (int k = 0; k < 6; ++k)
            nearest = std::min(nearest, std::abs(p.z - std::polar(1.0, k * pi / 3)));
        ev.metric = std::max({ev.metric, nearest, std::abs(p.w)});
        pts.push_back({{"z", io::to_json(p.z)}, {"w", io::to_json(p.w)}});
    }
    if (b.points.size() != 6)
        ev.metric = infinity();
    ev.samples = static_cast<int>(b.points.size());
    ev.values = {{"count", b.points.size()}, {"points", pts}, {"max_position_error", ev.metric}};
    return ev;
}

inline Evidence monodromy_permutations(Context& ctx)
{
    Evidence ev;
    json per = json::array();
    int mismatches = 0;
    const std::vector<cplx>& V = ctx.tracker.branch_values();
    for (cplx v : V) {
        const double r = 0.4 * min_spacing(V, v);
        const std::vector<int> perm = ctx.tracker.monodromy(circle_loop(v, std::min(r, 0.4 * std::abs(v) + r), 48));
        const std::vector<int> cycles = cycle_lengths(perm);
        const bool transposition =
            std::count(cycles.begin(), cycles.end(), 2) == 1 && std::count(cycles.begin(), cycles.end(), 1) + 1 ==
                                                                    static_cast<std::ptrdiff_t>(cycles.size());
        mismatches += !transposition;
        per.push_back({{"branch_value", io::to_json(v)}, {"permutation", perm}});
    }
    double reach = 0.0;
    for (cplx v : V)
        reach = std::max(reach, std::abs(v));
    const std::vector<int> all = ctx.tracker.monodromy(circle_loop(0.0, 2.0 * reach + 1.0, 96));
    std::vector<int> identity(all.size());
    std::iota(identity.begin(), identity.end(), 0);
    mismatches += all != identity;
    ev.metric = mismatches;
    ev.samples = static_cast<int>(V.size()) + 1;
    ev.values = {{"single_branch_loops", per}, {"all_branch_loop", all}, {"mismatches", mismatches}};
    return ev;
}

// ---- asserted: the map and its constants -------------------------------------

inline Evidence alpha_value(Context& ctx)
{
    const MapConstants k = map_constants(ctx.tracker);
    Evidence ev;
    ev.metric = std::abs(k.alpha - cplx(-1.0, 1.0));
    ev.samples = 1;
    ev.values = {{"alpha", io::to_json(k.alpha)},
                 {"polar_form_difference", std::abs(std::polar(std::sqrt(2.0), 3 * pi / 4) - k.alpha)}};
    return ev;
}

inline Evidence edge_constant(Context& ctx)
{
    const MapConstants k = map_constants(ctx.tracker);
    Evidence ev;
    ev.metric = std::abs(k.c_full - beta_reference());
    ev.samples = 1;
    ev.values = {{"L", k.edge_length}, {"C", k.c_full}, {"beta_reference", beta_reference()}};
    return ev;
}

/// f at `count` points of the unit disk kept off V (with Rz and conj z also off V).
template <class Fn>
void disk_samples(Context& ctx, int count, Fn fn)
{
    const cplx R = std::polar(1.0, pi / 3);
    const double standoff = ctx.config.tol.branch_standoff;
    for (int n = 0; n < count;) {
        const cplx z = random_disk_point(ctx.rng, 1.0);
        if (ctx.tracker.distance_to_branch(z) < standoff || ctx.tracker.distance_to_branch(R * z) < standoff ||
            ctx.tracker.distance_to_branch(std::conj(z)) < standoff)
            continue;
        fn(z);
        ++n;
    }
}

inline Evidence rotation_equivariance(Context& ctx)
{
    Evidence ev;
    const cplx R = std::polar(1.0, pi / 3);
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    disk_samples(ctx, ctx.config.equivariance_samples, [&](cplx z) {
        const cplx fz = integrate_form(ctx.tracker, ZPath{{0.0, z}, w0});
        const cplx frz = integrate_form(ctx.tracker, ZPath{{0.0, R * z}, w0});
        ev.metric = std::max(ev.metric, std::abs(frz - R * fz));
    });
    ev.samples = ctx.config.equivariance_samples;
    ev.values["max_abs_difference"] = ev.metric;
    return ev;
}

inline Evidence conjugation_symmetry(Context& ctx)
{
    Evidence ev;
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    disk_samples(ctx, ctx.config.equivariance_samples, [&](cplx z) {
        const cplx fz = integrate_form(ctx.tracker, ZPath{{0.0, z}, w0});
        const cplx fc = integrate_form(ctx.tracker, ZPath{{0.0, std::conj(z)}, w0});
        ev.metric = std::max(ev.metric, std::abs(fc - std::conj(fz)));
    });
    ev.samples = ctx.config.equivariance_samples;
    ev.values["max_abs_difference"] = ev.metric;
    return ev;
}

/// Random three-segment paths from 0 inside the branch-free unit disk.
inline std::vector<ZPath> random_disk_paths(Context& ctx, int count)
{
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    std::vector<ZPath> paths;
    for (int i = 0; i < count; ++i) {
        std::vector<cplx> v{0.0};
        for (int k = 0; k < 3; ++k)
            v.push_back(random_disk_point(ctx.rng, 0.95));
        paths.push_back({v, w0});
    }
    return paths;
}

inline Evidence path_refinement(Context& ctx)
{
    Evidence ev;
    std::vector<ZPath> paths = random_disk_paths(ctx, 10);
    const std::vector<cplx> V = ordered_branch_values(ctx.tracker);
    if (V.size() >= 2)
        paths.push_back(loop_around_pair(ctx.tracker, V[0], V[1]));
    for (const ZPath& p : paths)
        ev.metric = std::max(ev.metric, std::abs(integrate_form(ctx.tracker, p) - integrate_form(ctx.tracker, refined(p))));
    ev.samples = static_cast<int>(paths.size());
    ev.values["max_abs_change"] = ev.metric;
    return ev;
}

inline Evidence path_homotopy(Context& ctx)
{
    Evidence ev;
    for (const ZPath& p : random_disk_paths(ctx, 10)) {
        const ZPath direct{{0.0, p.vertices.back()}, p.w_start};
        ev.metric = std::max(ev.metric, std::abs(integrate_form(ctx.tracker, p) - integrate_form(ctx.tracker, direct)));
    }
    ev.samples = 10;
    ev.values["max_abs_difference"] = ev.metric;
    return ev;
}

// ---- asserted: planar geometry ------------------------------------------------

inline Evidence dihedral_relations(Context& ctx)
{
    std::vector<cplx> probes;
    for (int i = 0; i < 10; ++i)
        probes.push_back(random_disk_point(ctx.rng, 3.0));
    const auto R = PlanarIsometry::R(), U = PlanarIsometry::U();
    const double r6 = map_distance(power(R, 6), PlanarIsometry::identity(), probes);
    const double u2 = map_distance(compose(U, U), PlanarIsometry::identity(), probes);
    const double ru = map_distance(compose(R, U), compose(U, inverse(R)), probes);
    const auto group = dihedral_group();
    const auto reflections = std::count_if(group.begin(), group.end(), [](const auto& g) { return g.reflect; });
    Evidence ev;
    ev.metric = std::max({r6, u2, ru});
    if (group.size() != 12 || reflections != 6)
        ev.metric = infinity();
    ev.samples = static_cast<int>(probes.size());
    ev.values = {{"R6_vs_id", r6}, {"U2_vs_id", u2}, {"RU_vs_URinv", ru}, {"group_order", group.size()},
                 {"reflections", reflections}};
    return ev;
}

inline Evidence tiling_coverage(Context& ctx, double edge)
{
    const HexLayout layout(edge);
    const CoverageReport r = coverage_check(layout, static_cast<std::size_t>(ctx.config.coverage_samples),
                                            ctx.config.coverage_radius_edges * edge, ctx.rng);
    Evidence ev;
    ev.metric = std::max(r.max_outside, r.max_lattice_residual);
    ev.samples = static_cast<int>(r.samples);
    ev.values = {{"edge", edge},
                 {"radius", ctx.config.coverage_radius_edges * edge},
                 {"failures", r.failures},
                 {"max_outside", r.max_outside},
                 {"max_lattice_residual", r.max_lattice_residual}};
    return ev;
}

inline Evidence stellated_area(Context& ctx)
{
    const HexLayout layout(map_constants(ctx.tracker).edge_length);
    const double ratio = polygon_area(layout.stellated()) / polygon_area(layout.hexagon());
    Evidence ev;
    ev.metric = std::abs(ratio - 2.0);
    ev.samples = 1;
    ev.values = {{"edge", layout.edge()}, {"vertices", layout.stellated().size()}, {"area_ratio", ratio}};
    return ev;
}

inline Evidence lattice_closure(Context& ctx)
{
    const HexLayout layout(map_constants(ctx.tracker).edge_length);
    Evidence ev;
    json coords = json::array();
    for (int k = 0; k < 6; ++k) {
        const auto [a, b] = layout.lattice_coords(layout.u(k));
        ev.metric = std::max({ev.metric, std::abs(a - std::round(a)), std::abs(b - std::round(b))});
        coords.push_back({a, b});
    }
    ev.samples = 6;
    ev.values = {{"u_lattice_coords", coords}, {"max_non_integrality", ev.metric}};
    return ev;
}

// ---- contested ------------------------------------------------------------------

inline Evidence omega_nondegenerate(Context& ctx)
{
    Evidence ev;
    json pts = json::array();
    for (int i = 0; i < ctx.config.omega_points; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const double value = poisson_bracket(ctx.curve, p);
        ev.metric = std::max(ev.metric, std::abs(value));
        pts.push_back({{"z", io::to_json(p.z)}, {"w", io::to_json(p.w)}, {"omega_Xu_Xv", value}});
    }
    ev.samples = ctx.config.omega_points;
    ev.values = {{"points", pts},
                 {"max_abs_omega", ev.metric},
                 {"finding", "Omega vanishes on the span of X_u, X_v, which is the tangent plane of S: S is "
                             "Lagrangian for Re(dz^dw), so Omega restricted to S is zero rather than nondegenerate"}};
    return ev;
}

inline Evidence stated_field_defect(Context& ctx)
{
    Evidence ev;
    double stated_mean = 0.0, implemented_max = 0.0, formula_gap = 0.0;
    const int n = ctx.config.field_points;
    for (int i = 0; i < n; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const Partials d = partials(ctx.curve, p.z, p.w);
        const cplx stated_dz = 2.0 * p.w, stated_dw = -6.0 * std::pow(p.w, 5);
        const double defect = std::abs(d.fz * stated_dz + d.fw * stated_dw);
        const double closed_form = 12.0 * std::abs(p.w) * std::abs(std::pow(p.z, 5) - std::pow(p.w, 5));
        const ComplexField f = hamiltonian_field(ctx.curve, p.z, p.w);
        ev.metric = std::max(ev.metric, defect);
        stated_mean += defect / n;
        implemented_max = std::max(implemented_max, std::abs(d.fz * f.dz + d.fw * f.dw));
        formula_gap = std::max(formula_gap, std::abs(defect - closed_form) / std::max(1.0, closed_form));
    }
    ev.samples = n;
    ev.values = {{"stated_field", "(2w, -6w^5)"},
                 {"implemented_field", "(2w, -6z^5)"},
                 {"stated_max_tangency_defect", ev.metric},
                 {"stated_mean_tangency_defect", stated_mean},
                 {"implemented_max_tangency_defect", implemented_max},
                 {"closed_form_12|w||z^5-w^5|_relative_gap", formula_gap}};
    return ev;
}

inline Evidence triangle_image(Context& ctx)
{
    const MapConstants k = map_constants(ctx.tracker);
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    const cplx z1 = std::polar(1.0, pi / 3);
    const cplx a = k.edge_length, b = integrate_form(ctx.tracker, ZPath{{0.0, z1}, w0, true});
    const cplx chord = (b - a) / std::abs(b - a);
    const int n = 32;
    double worst = 0.0;
    json arc = json::array();
    for (int j = 1; j < n; ++j) {
        const cplx z = std::polar(1.0, j * pi / (3.0 * n));
        const cplx fz = integrate_form(ctx.tracker, ZPath{{0.0, z}, w0});
        const double off = ((fz - a) * std::conj(chord)).imag();
        worst = std::max(worst, std::abs(off));
        arc.push_back({{"theta", j * pi / (3.0 * n)}, {"f", io::to_json(fz)}, {"chord_offset", off}});
    }
    const cplx mid = integrate_form(ctx.tracker, ZPath{{0.0, std::polar(0.5, pi / 6)}, w0});
    Evidence ev;
    ev.metric = worst / k.edge_length;
    ev.samples = n - 1;
    ev.values = {{"image_vertices", {io::to_json(a), io::to_json(b)}},
                 {"image_radius", k.edge_length},
                 {"claimed_radius_C", k.c_full},
                 {"image_sector_degrees", {std::arg(a) * 180 / pi, std::arg(b) * 180 / pi}},
                 {"claimed_sector_degrees", {60.0, 120.0}},
                 {"interior_probe_argument_degrees", std::arg(mid) * 180 / pi},
                 {"max_arc_image_offset_from_chord", worst},
                 {"relative_offset", ev.metric},
                 {"arc_image", arc}};
    return ev;
}

inline Evidence surface_quotient(Context& ctx)
{
    const std::vector<cplx> V = ordered_branch_values(ctx.tracker);
    const std::size_t sheets = ctx.tracker.labeled_fiber(0.0).size();
    int ramification = 0;
    for (cplx v : V) {
        const double r = 0.4 * min_spacing(V, v);
        for (int len : cycle_lengths(ctx.tracker.monodromy(circle_loop(v, std::isfinite(r) ? r : 0.4, 48))))
            ramification += len - 1;
    }
    double reach = 0.0;
    for (cplx v : V)
        reach = std::max(reach, std::abs(v));
    const std::vector<int> at_infinity = cycle_lengths(ctx.tracker.monodromy(circle_loop(0.0, 2.0 * reach + 1.0, 96)));
    int ramification_inf = 0;
    for (int len : at_infinity)
        ramification_inf += len - 1;
    // Riemann-Hurwitz for the projection to the sphere: 2g - 2 = -2n + sum (e - 1).
    const int twice_g = -2 * static_cast<int>(sheets) + 2 + ramification + ramification_inf;
    const int genus = twice_g / 2;
    const int punctures = static_cast<int>(at_infinity.size());

    Evidence ev;
    ev.metric = genus;
    ev.samples = static_cast<int>(V.size()) + 1;
    ev.values = {{"sheets", sheets},
                 {"finite_ramification", ramification},
                 {"points_at_infinity", punctures},
                 {"genus", genus},
                 {"first_homology_rank", 2 * genus + punctures - 1},
                 {"torus_quotient_genus", 1},
                 {"torus_quotient_homology_rank", 2}};
    if (V.size() >= 2) {
        const MapConstants k = map_constants(ctx.tracker);
        const cplx p01 = integrate_form(ctx.tracker, loop_around_pair(ctx.tracker, V[0], V[1]));
        const cplx p12 = integrate_form(ctx.tracker, loop_around_pair(ctx.tracker, V[1], V[2 % V.size()]));
        ev.values["periods"] = {io::to_json(p01), io::to_json(p12)};
        ev.values["period_moduli_over_L"] = {std::abs(p01) / k.edge_length, std::abs(p12) / k.edge_length};
        ev.values["periods_in_lattice_L"] = {lattice_json(HexLayout(k.edge_length), p01),
                                             lattice_json(HexLayout(k.edge_length), p12)};
        ev.values["periods_in_lattice_C"] = {lattice_json(HexLayout(k.c_full), p01),
                                             lattice_json(HexLayout(k.c_full), p12)};
    }
    return ev;
}

inline Evidence stellated_index(Context& ctx)
{
    const HexLayout layout(map_constants(ctx.tracker).edge_length);
    auto vertex_hits = [&](const Polygon& tri) {
        int hits = 0;
        for (cplx v : tri)
            for (cplx h : layout.hexagon())
                hits += std::abs(v - h) <= 1e-12 * layout.edge();
        return hits;
    };
    json stated_hits = json::array(), corrected_hits = json::array();
    for (int k = 0; k < 6; ++k) {
        stated_hits.push_back(vertex_hits(layout.translated_rotated_triangle(k, (4 + k) % 6)));
        corrected_hits.push_back(vertex_hits(layout.erected_triangle(k)));
    }
    const Polygon K = layout.stellated();
    int inside = 0, stated_cover = 0, corrected_cover = 0;
    for (int i = 0; i < 4000; ++i) {
        const cplx x = random_disk_point(ctx.rng, 2.0 * layout.edge());
        if (!polygon_contains(K, x) || layout.contains(x, 1e-12))
            continue;
        ++inside;
        bool p = false, c = false;
        for (int k = 0; k < 6; ++k) {
            p = p || polygon_contains(layout.translated_rotated_triangle(k, (4 + k) % 6), x);
            c = c || polygon_contains(layout.erected_triangle(k), x);
        }
        stated_cover += p;
        corrected_cover += c;
    }
    Evidence ev;
    ev.metric = inside ? static_cast<double>(stated_cover) / inside : 0.0;
    ev.samples = inside;
    ev.values = {{"stated_rotation_index", "(4+k) mod 6"},
                 {"corrected_rotation_index", "(k+2) mod 6"},
                 {"stated_hexagon_vertex_hits", stated_hits},
                 {"corrected_hexagon_vertex_hits", corrected_hits},
                 {"stated_coverage_of_K_minus_H", ev.metric},
                 {"corrected_coverage_of_K_minus_H", inside ? static_cast<double>(corrected_cover) / inside : 0.0}};
    return ev;
}

inline Evidence hexagon_edge_factor(Context& ctx)
{
    const MapConstants k = map_constants(ctx.tracker);
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    const cplx f1 = integrate_form(ctx.tracker, ZPath{{0.0, std::polar(1.0, pi / 3)}, w0, true});
    const double edge = std::abs(f1 - k.edge_length);
    Evidence ev;
    ev.metric = k.c_full / edge;
    ev.samples = 1;
    ev.values = {{"L", k.edge_length},
                 {"C", k.c_full},
                 {"image_hexagon_edge", edge},
                 {"C_over_image_edge", ev.metric}};
    return ev;
}

inline Evidence delta_right_inverse(Context& ctx)
{
    const std::vector<cplx> V = ordered_branch_values(ctx.tracker);
    const cplx alpha = map_constants(ctx.tracker).alpha;
    double lo = infinity(), hi = 0.0;
    for (int i = 0; i < ctx.config.field_points; ++i) {
        const SurfacePoint p = sample_point(ctx);
        const double j = std::abs(alpha / partials(ctx.curve, p.z, p.w).fw);
        lo = std::min(lo, j);
        hi = std::max(hi, j);
    }
    json at_branch = json::array();
    for (const SurfacePoint& b : branch_points(ctx.curve, ctx.config.tol).points)
        at_branch.push_back(std::abs(alpha / partials(ctx.curve, b.z, b.w).fz));

    // One surface point reached along two base paths that differ by a loop
    // around two branch values.
    const ZPath loop = loop_around_pair(ctx.tracker, V.at(0), V.at(1));
    const cplx z = loop.vertices.front();
    const cplx w0 = ctx.tracker.labeled_fiber(0.0).front();
    std::vector<cplx> long_way{0.0};
    long_way.insert(long_way.end(), loop.vertices.begin(), loop.vertices.end());
    const SurfacePoint point = make_point(ctx.curve, z, loop.w_start);
    const cplx direct = delta(ctx.tracker, point, ZPath{{0.0, z}, w0}).zeta;
    const cplx around = delta(ctx.tracker, point, ZPath{long_way, w0}).zeta;

    Evidence ev;
    ev.metric = std::abs(around - direct);
    ev.samples = ctx.config.field_points;
    ev.values = {{"min_abs_dzeta_dz", lo},
                 {"max_abs_dzeta_dz", hi},
                 {"abs_dzeta_dw_at_branch_points", at_branch},
                 {"point", {{"z", io::to_json(z)}, {"w", io::to_json(loop.w_start)}}},
                 {"zeta_direct_path", io::to_json(direct)},
                 {"zeta_around_two_branch_values", io::to_json(around)},
                 {"zeta_ambiguity", ev.metric}};
    return ev;
}

} // namespace detail

/// Every claim the audit evaluates, in report order.
inline std::vector<Claim> registry()
{
    using namespace detail;
    const auto A = Kind::asserted;
    const auto C = Kind::contested;
    const double none = std::numeric_limits<double>::quiet_NaN();
    return {
        {"field-u-embedding", "X_u = Re X_F", A, 1e-12, field_u_embedding},
        {"field-v-global-sign", "X_v = Im X_F (one global sign)", A, 1e-12, field_v_global_sign},
        {"field-tangency", "X_F is tangent to the level sets of F", A, 1e-12, field_tangency},
        {"poisson-bracket-zero", "{u,v} = 0", A, 1e-9, poisson_zero},
        {"fields-independent", "X_u and X_v are linearly independent at each point of S", A, 0.0,
         fields_independent},
        {"flow-conservation", "the flow of X_F preserves S", A, 1e-8, flow_conservation},
        {"flow-commutator", "the flows of X_u and X_v commute", A, 1e-6, flow_commutator},
        {"regular-value", "1 is a regular value of F; the only critical point is (0,0)", A, 0.0, regular_value},
        {"branch-points", "branch points are (e^{2 pi i k/6}, 0), k = 0..5", A, 1e-10, branch_point_positions},
        {"monodromy", "a loop around one branch value swaps the sheets; a loop around all is trivial", A, 0.0,
         monodromy_permutations},
        {"alpha-value", "alpha = sqrt2 e^{3 pi i/4} = -1+i", A, 0.0, alpha_value},
        {"edge-constant-beta", "C = int_0^1 dz/sqrt(1-z^6) = (1/6) B(1/6,1/2)", A, 1e-8, edge_constant},
        {"rotation-equivariance", "f(Rz) = R f(z)", A, 1e-8, rotation_equivariance},
        {"conjugation-symmetry", "f(conj z) = conj f(z)", A, 1e-8, conjugation_symmetry},
        {"flow-straightening", "delta maps X_F to alpha d/dzeta", A, 1e-6, flow_straightening},
        {"path-refinement-stability", "f along a path does not depend on its subdivision", A, 1e-9, path_refinement},
        {"path-homotopy-invariance", "f depends only on the homotopy class of the path", A, 1e-8, path_homotopy},
        {"dihedral-relations", "R^6 = U^2 = id, RU = UR^{-1}; the group has order 12", A, 1e-12,
         dihedral_relations},
        {"tiling-coverage-L", "H is a fundamental domain of the translation group (edge L)", A, 1e-9,
         [](Context& ctx) { return tiling_coverage(ctx, map_constants(ctx.tracker).edge_length); }},
        {"tiling-coverage-C", "H is a fundamental domain of the translation group (edge C)", A, 1e-9,
         [](Context& ctx) { return tiling_coverage(ctx, map_constants(ctx.tracker).c_full); }},
        {"stellated-area", "K is H with an equilateral triangle erected on each edge", A, 1e-9, stellated_area},
        {"lattice-closure", "every u_k lies in the lattice spanned by u_0, u_1", A, 1e-9, lattice_closure},
        {"omega-nondegenerate-on-S", "Omega(X_u, X_v) != 0 on S", C, none, omega_nondegenerate},
        {"hamiltonian-field-stated-form", "(X_F)|S = 2w d/dz - 6w^5 d/dw", C, none, stated_field_defect},
        {"triangle-image", "T = f(T') = RT' with radius C", C, none, triangle_image},
        {"surface-torus-quotient", "S = R^2 / T", C, none, surface_quotient},
        {"stellated-formula-index", "K = H u U_k tau_k(R^{(4+k) mod 6} T)", C, none, stellated_index},
        {"hexagon-edge-factor", "f sends the unit-edge hexagon onto the hexagon of edge C", C, none,
         hexagon_edge_factor},
        {"delta-right-inverse", "rho o lambda o delta = id_S", C, none, delta_right_inverse},
    };
}

inline ClaimResult evaluate_claim(const Claim& claim, const RunConfig& config, const Curve& curve,
                                  const SheetTracker& tracker)
{
    ClaimResult r{claim.id, claim.statement, claim.kind, claim.tolerance, Verdict::error, {}, {}, 0.0};
    Context ctx{config, curve, tracker, detail::claim_rng(config.seed, claim.id)};
    const auto start = std::chrono::steady_clock::now();
    try {
        r.evidence = claim.evaluate(ctx);
        if (claim.kind == Kind::contested)
            r.verdict = Verdict::value;
        else
            r.verdict = r.evidence.metric <= claim.tolerance ? Verdict::pass : Verdict::fail;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

namespace detail {

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json result_json(const ClaimResult& r, bool timing)
{
    json j{{"id", r.id},
           {"statement", r.statement},
           {"kind", to_string(r.kind)},
           {"tolerance", r.kind == Kind::asserted ? number_or_null(r.tolerance) : json(nullptr)},
           {"verdict", to_string(r.verdict)}};
    if (r.verdict == Verdict::error) {
        j["error"] = r.error;
        j["metric"] = nullptr;
        j["samples"] = 0;
        j["values"] = json::object();
    } else {
        j["metric"] = number_or_null(r.evidence.metric);
        j["samples"] = r.evidence.samples;
        j["values"] = r.evidence.values;
    }
    if (timing)
        j["wall_time_s"] = r.seconds;
    return j;
}

} // namespace detail

/// Evaluates every registered claim. The JSON document depends only on the
/// configuration unless `config.timing` adds per-claim wall times.
inline AuditReport run_audit(const RunConfig& config, const Curve& curve)
{
    AuditReport report;
    const SheetTracker tracker(curve, config.tol);
    json claims = json::array();
    int counts[4] = {0, 0, 0, 0};
    for (const Claim& claim : registry()) {
        report.results.push_back(evaluate_claim(claim, config, curve, tracker));
        const ClaimResult& r = report.results.back();
        ++counts[static_cast<int>(r.verdict)];
        claims.push_back(detail::result_json(r, config.timing));
    }
    json env = config_to_json(config);
    env["curve_definition"] = io::curve_to_json(curve);
    report.document = {{"report", "riemann-audit"},
                       {"version", 1},
                       {"environment", env},
                       {"summary",
                        {{"claims", report.results.size()},
                         {"PASS", counts[0]},
                         {"FAIL", counts[1]},
                         {"VALUE", counts[2]},
                         {"ERROR", counts[3]},
                         {"asserted_failures", report.asserted_failures()}}},
                       {"claims", claims}};
    return report;
}

inline std::string format_metric(const json& j)
{
    if (j.is_null())
        return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", j.get<double>());
    return buf;
}

/// Markdown summary: one table row per claim, then the scalar evidence of the
/// contested claims.
inline std::string to_markdown(const json& doc)
{
    std::string md = "# Audit report\n\n";
    const json& env = doc.at("environment");
    md += "Curve `" + env.at("curve").get<std::string>() + "`, seed " + std::to_string(env.at("seed").get<std::uint64_t>()) +
          ".\n\n";
    const json& s = doc.at("summary");
    md += "PASS " + std::to_string(s.at("PASS").get<int>()) + ", FAIL " + std::to_string(s.at("FAIL").get<int>()) +
          ", VALUE " + std::to_string(s.at("VALUE").get<int>()) + ", ERROR " + std::to_string(s.at("ERROR").get<int>()) +
          ".\n\n";
    md += "| claim | kind | verdict | metric | tolerance | samples |\n|---|---|---|---|---|---|\n";
    for (const json& c : doc.at("claims")) {
        md += "| `" + c.at("id").get<std::string>() + "` | " + c.at("kind").get<std::string>() + " | " +
              c.at("verdict").get<std::string>() + " | " + format_metric(c.at("metric")) + " | " +
              format_metric(c.at("tolerance")) + " | " + std::to_string(c.at("samples").get<int>()) + " |\n";
    }
    for (const json& c : doc.at("claims")) {
        if (c.at("kind") != "contested" && c.at("verdict") != "ERROR")
            continue;
        md += "\n## " + c.at("id").get<std::string>() + "\n\n> " + c.at("statement").get<std::string>() + "\n\n";
        if (c.contains("error"))
            md += "- error: " + c.at("error").get<std::string>() + "\n";
        for (const auto& [key, value] : c.at("values").items()) {
            if (value.is_number())
                md += "- " + key + ": " + format_metric(value) + "\n";
            else if (value.is_string())
                md += "- " + key + ": " + value.get<std::string>() + "\n";
            else if (value.is_array() && !value.empty() && value.size() <= 6 && value[0].is_number())
                md += "- " + key + ": " + value.dump() + "\n";
        }
    }
    return md;
}

} // namespace riemann::audit
