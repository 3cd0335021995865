#pragma once

// Path integrals of the form dz / F_w (dz / 2w on w^2 + z^6 = 1), the map
// constants, the straightening coordinate zeta = alpha * f(z) and its check
// against the Hamiltonian flow.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "continuation.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "gauss_legendre.hpp"

namespace riemann {

/// sqrt(2) * exp(3 pi i / 4).
inline constexpr cplx map_alpha{-1.0, 1.0};

struct FormIntegral {
    cplx value{};
    std::optional<cplx> w_end;  // empty when the path ends on a branch value
    std::vector<cplx> cumulative;  // integral up to each vertex
    std::vector<cplx> vertex_w;
};

namespace detail {

// Integral of g over a parameter interval with w continued from the anchor.
// `march(s_from, w_from, s_to)` continues w along the parameterisation and
// `integrand(s, w)` is the pulled-back form.
class AdaptiveFormRule {
public:
    using March = std::function<cplx(double, cplx, double)>;
    using Integrand = std::function<cplx(double, cplx)>;

    AdaptiveFormRule(March march, Integrand integrand, double tol, int max_depth)
        : march_(std::move(march)), integrand_(std::move(integrand)), tol_(tol), max_depth_(max_depth)
    {}

    cplx integrate(double s_from, cplx w_from, double s_to) const
    {
        return refine(s_from, w_from, s_to, panel(s_from, w_from, s_to), 0);
    }

private:
    cplx panel(double s_from, cplx w_from, double s_to) const
    {
        const auto& rule = gauss_legendre_16();
        const double mid = 0.5 * (s_from + s_to);
        const double half = 0.5 * (s_to - s_from);
        cplx sum{};
        double s = s_from;
        cplx w = w_from;
        // Nodes are visited in the direction of travel so w is marched monotonically.
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double node = mid + half * rule.nodes[j];
            w = march_(s, w, node);
            s = node;
            sum += rule.weights[j] * integrand_(node, w);
        }
        return half * sum;
    }

    cplx refine(double s_from, cplx w_from, double s_to, cplx whole, int depth) const
    {
        const double mid = 0.5 * (s_from + s_to);
        const cplx w_mid = march_(s_from, w_from, mid);
        const cplx first = panel(s_from, w_from, mid);
        const cplx second = panel(mid, w_mid, s_to);
        const cplx halves = first + second;
        if (std::abs(whole - halves) <= tol_ || std::abs(whole - halves) <= 32.0 * 2.2e-16 * std::abs(halves))
            return halves;
        if (depth + 1 > max_depth_)
            throw Error(ErrorKind::quadrature_failure, "adaptive depth limit exceeded", depth + 1);
        return refine(s_from, w_from, mid, first, depth + 1) + refine(mid, w_mid, s_to, second, depth + 1);
    }

    March march_;
    Integrand integrand_;
    double tol_;
    int max_depth_;
};

} // namespace detail

/// Integral of dz / F_w along a straight segment from (a, w_a) to b.
inline cplx integrate_segment(const SheetTracker& tracker, cplx a, cplx w_a, cplx b)
{
    const Curve& curve = tracker.curve();
    const cplx dz = b - a;
    detail::AdaptiveFormRule rule(
        [&](double s0, cplx w0, double s1) { return tracker.march(a + s0 * dz, w0, a + s1 * dz); },
        [&](double s, cplx w) { return dz / partials(curve, a + s * dz, w).fw; },
        tracker.tolerances().quad, tracker.tolerances().quad_max_depth);
    return rule.integrate(0.0, w_a, 1.0);
}

/// Integral of dz / F_w from (a, w_a) into the branch value `zb`. The
/// substitution z = zb + (a - zb) tau^2 removes the inverse square-root
/// singularity; w is continued in tau, where it stays analytic.
inline cplx integrate_into_branch(const SheetTracker& tracker, cplx a, cplx w_a, cplx zb)
{
    const Curve& curve = tracker.curve();
    const Tolerances& tol = tracker.tolerances();
    const cplx span = a - zb;
    auto z_of = [&](double tau) { return zb + span * (tau * tau); };
    auto march_tau = [&](double t0, cplx w0, double t1) {
        double t = t0;
        cplx w = w0;
        while (t != t1) {
            const double room = std::abs(t1 - t);
            const double step = std::min({room, 0.05, 0.1 * t});
            if (!(step > 0.0))
                throw Error(ErrorKind::quadrature_failure, "tau continuation reached the branch value");
            const double next = (step >= room) ? t1 : (t1 > t ? t + step : t - step);
            const Partials d = partials(curve, z_of(t), w);
            const cplx slope = -d.fz / d.fw * (2.0 * t * span);
            const cplx z_next = z_of(next);
            SurfacePoint p;
            try {
                p = project_to_surface(curve, z_next, w + slope * (next - t), tol);
            } catch (const Error& e) {
                throw Error(ErrorKind::continuation_failure, e.detail(), 1.0 - next);
            }
            if (p.z != z_next)
                throw Error(ErrorKind::continuation_failure, "corrector left the fiber near the branch value",
                            1.0 - next);
            w = p.w;
            t = next;
        }
        return w;
    };
    detail::AdaptiveFormRule rule(
        march_tau,
        [&](double tau, cplx w) { return 2.0 * tau * span / partials(curve, z_of(tau), w).fw; },
        tol.quad, tol.quad_max_depth);
    return rule.integrate(1.0, w_a, 0.0);
}

inline FormIntegral integrate_form_detailed(const SheetTracker& tracker, const ZPath& path)
{
    const Tolerances& tol = tracker.tolerances();
    if (path.vertices.empty())
        throw Error(ErrorKind::path_error, "path has no vertices");
    const std::size_t nseg = path.vertices.size() - 1;
    if (path.ends_at_branch && tracker.distance_to_branch(path.back()) > 1e-12)
        throw Error(ErrorKind::path_error, "path is flagged to end on a branch value but does not");
    for (std::size_t i = 0; i < nseg; ++i) {
        const cplx a = path.vertices[i], b = path.vertices[i + 1];
        if (a == b)
            throw Error(ErrorKind::path_error, "consecutive vertices coincide");
        const bool singular = path.ends_at_branch && i + 1 == nseg;
        double clearance = 0.0;
        if (!singular) {
            clearance = tracker.segment_clearance(a, b);
        } else {
            clearance = std::numeric_limits<double>::infinity();
            for (cplx v : tracker.branch_values())
                if (std::abs(v - b) > 1e-12)
                    clearance = std::min(clearance, segment_distance(a, b, v));
            clearance = std::min(clearance, tracker.distance_to_branch(a));
        }
        if (clearance < tol.branch_standoff)
            throw Error(ErrorKind::path_error, "path passes within the branch standoff");
    }
    if (residual(tracker.curve(), path.front(), path.w_start) > std::max(tol.surface, 1e-8))
        throw Error(ErrorKind::path_error, "(z0, w_start) is not on the surface");

    FormIntegral out;
    cplx w = path.w_start;
    out.cumulative.push_back(cplx{});
    out.vertex_w.push_back(w);
    for (std::size_t i = 0; i < nseg; ++i) {
        const cplx a = path.vertices[i], b = path.vertices[i + 1];
        if (path.ends_at_branch && i + 1 == nseg) {
            out.value += integrate_into_branch(tracker, a, w, b);
            out.cumulative.push_back(out.value);
            out.vertex_w.push_back(cplx{std::nan(""), std::nan("")});
            return out;
        }
        out.value += integrate_segment(tracker, a, w, b);
        w = tracker.march(a, w, b);
        out.cumulative.push_back(out.value);
        out.vertex_w.push_back(w);
    }
    out.w_end = w;
    return out;
}

inline cplx integrate_form(const SheetTracker& tracker, const ZPath& path)
{
    return integrate_form_detailed(tracker, path).value;
}

inline cplx integrate_form(const Curve& curve, const ZPath& path, const Tolerances& tol = {})
{
    return integrate_form(SheetTracker(curve, tol), path);
}

struct MapConstants {
    cplx alpha = map_alpha;
    double edge_length = 0.0;  // L = f(1) along [0, 1]
    double c_full = 0.0;       // 2L = integral of dz / sqrt(1 - z^6) over [0, 1]
};

/// Needs a curve with a branch value at z = 1 reachable from 0 along [0, 1].
inline MapConstants map_constants(const SheetTracker& tracker)
{
    if (tracker.distance_to_branch(1.0) > 1e-12)
        throw Error(ErrorKind::unsupported_form, "map constants need a branch value at z = 1");
    const cplx w0 = tracker.labeled_fiber(0.0).front();
    const cplx value = integrate_form(tracker, ZPath{{0.0, 1.0}, w0, true});
    MapConstants out;
    out.edge_length = value.real();
    out.c_full = 2.0 * value.real();
    return out;
}

inline MapConstants map_constants(const Curve& curve, const Tolerances& tol = {})
{
    return map_constants(SheetTracker(curve, tol));
}

struct StraightCoordinate {
    cplx zeta;
    ZPath base_path;
};

/// zeta = alpha * f(z) with f integrated along `base_path` from (0, sheet 0).
inline StraightCoordinate delta(const SheetTracker& tracker, const SurfacePoint& point, const ZPath& base_path)
{
    const Tolerances& tol = tracker.tolerances();
    if (base_path.vertices.empty() || std::abs(base_path.front()) > 1e-14)
        throw Error(ErrorKind::path_error, "base path must start at z = 0");
    if (std::abs(base_path.w_start - tracker.labeled_fiber(0.0).front()) > tol.sheet_match)
        throw Error(ErrorKind::wrong_sheet, "base path must start on sheet 0");
    if (std::abs(base_path.back() - point.z) > 1e-12)
        throw Error(ErrorKind::path_error, "base path does not end at the point");
    if (base_path.vertices.size() == 1) {
        if (std::abs(base_path.w_start - point.w) > tol.sheet_match)
            throw Error(ErrorKind::wrong_sheet, "point is not on the base sheet");
        return {cplx{}, base_path};
    }
    const FormIntegral f = integrate_form_detailed(tracker, base_path);
    if (!f.w_end || std::abs(*f.w_end - point.w) > tol.sheet_match)
        throw Error(ErrorKind::wrong_sheet, "continuation along the base path ends on another sheet",
                    f.w_end ? std::abs(*f.w_end - point.w) : 0.0);
    return {map_alpha * f.value, base_path};
}

inline StraightCoordinate delta(const Curve& curve, const SurfacePoint& point, const ZPath& base_path,
                                const Tolerances& tol = {})
{
    return delta(SheetTracker(curve, tol), point, base_path);
}

/// A base path from (0, sheet 0) to `point`: the straight segment when it is
/// branch-free and lands on point.w, otherwise the segment preceded by a square
/// detour around one branch value (which swaps sheets on a two-sheeted cover).
inline ZPath sheet_path(const SheetTracker& tracker, const SurfacePoint& point)
{
    const Tolerances& tol = tracker.tolerances();
    const cplx w0 = tracker.labeled_fiber(0.0).front();
    auto lands = [&](const ZPath& path) {
        try {
            return std::abs(tracker.continue_w(path).w_end - point.w) <= tol.sheet_match;
        } catch (const Error&) {
            return false;
        }
    };
    if (point.z == cplx{}) {
        const ZPath trivial{{0.0}, w0};
        if (std::abs(point.w - w0) <= tol.sheet_match)
            return trivial;
    } else if (const ZPath straight{{0.0, point.z}, w0}; lands(straight)) {
        return straight;
    }
    for (cplx v : tracker.branch_values()) {
        if (std::abs(v) == 0.0)
            continue;
        const cplx u = v / std::abs(v);
        const double r = std::abs(v);
        // Square of half-width 0.45 r around v, entered from 0.5 v.
        std::vector<cplx> vertices{0.0};
        for (cplx c : {cplx(0.5, 0.0), cplx(0.5, -0.4), cplx(1.4, -0.4), cplx(1.4, 0.4), cplx(0.5, 0.4),
                       cplx(0.5, 0.0)})
            vertices.push_back(r * u * c);
        if (point.z != vertices.back())
            vertices.push_back(point.z);
        const ZPath detour{vertices, w0};
        if (lands(detour))
            return detour;
    }
    throw Error(ErrorKind::wrong_sheet, "no base path found that reaches the point's sheet");
}

/// max_t |delta(gamma(t)) - delta(gamma(0)) - alpha t| along a direction-1 flow
/// trace, extending `base_path` through the z-projection of the trace.
inline double straightening_residual(const SheetTracker& tracker, const FlowTrace& trace, const ZPath& base_path)
{
    if (trace.samples.empty())
        return 0.0;
    if (std::abs(trace.direction - cplx{1.0, 0.0}) > 1e-14)
        throw Error(ErrorKind::invalid_input, "straightening is defined for the direction-1 flow");
    const Tolerances& tol = tracker.tolerances();
    const SurfacePoint& start = trace.samples.front().point;
    const cplx zeta0 = delta(tracker, start, base_path).zeta;

    double worst = 0.0;
    cplx acc{};
    cplx w = start.w;
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        const FlowSample& prev = trace.samples[i - 1];
        const FlowSample& cur = trace.samples[i];
        if (cur.point.z != prev.point.z) {
            if (tracker.segment_clearance(prev.point.z, cur.point.z) < tol.branch_standoff)
                throw Error(ErrorKind::path_error, "trace projection passes within the branch standoff",
                            cur.t);
            acc += integrate_segment(tracker, prev.point.z, w, cur.point.z);
            w = tracker.march(prev.point.z, w, cur.point.z);
            if (std::abs(w - cur.point.w) > tol.sheet_match)
                throw Error(ErrorKind::wrong_sheet, "continued w departs from the trace", cur.t);
        }
        const cplx zeta = zeta0 + map_alpha * acc;
        worst = std::max(worst, std::abs(zeta - zeta0 - map_alpha * cur.t));
    }
    return worst;
}

} // namespace riemann
