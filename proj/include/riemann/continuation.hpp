#pragma once

// Analytic continuation of w along polylines in the z-plane and the sheet
// permutations (monodromy) of closed loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "tolerances.hpp"

namespace riemann {

struct ZPath {
    std::vector<cplx> vertices;
    cplx w_start{};
    /// The last vertex is deliberately a branch value. Only quadrature accepts this.
    bool ends_at_branch = false;

    cplx front() const { return vertices.front(); }
    cplx back() const { return vertices.back(); }
};

inline double segment_distance(cplx a, cplx b, cplx p)
{
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0)
        return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(a + t * ab - p);
}

/// Midpoint refinement of every segment.
inline ZPath refined(const ZPath& path)
{
    ZPath out = path;
    out.vertices.clear();
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        out.vertices.push_back(path.vertices[i]);
        out.vertices.push_back(0.5 * (path.vertices[i] + path.vertices[i + 1]));
    }
    out.vertices.push_back(path.vertices.back());
    return out;
}

struct ContinuationResult {
    cplx w_end;
    std::vector<cplx> vertex_w;
};

/// Continuation engine bound to one curve: caches the branch values and walks
/// straight segments with steps of at most a tenth of the distance to them.
class SheetTracker {
public:
    explicit SheetTracker(const Curve& curve, const Tolerances& tol = {})
        : curve_(curve), tol_(tol), branch_(branch_points(curve, tol))
    {}

    const Curve& curve() const noexcept { return curve_; }
    const Tolerances& tolerances() const noexcept { return tol_; }
    const std::vector<cplx>& branch_values() const noexcept { return branch_.values; }
    const BranchData& branch_data() const noexcept { return branch_; }

    double distance_to_branch(cplx z) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (cplx v : branch_.values)
            d = std::min(d, std::abs(z - v));
        return d;
    }

    double segment_clearance(cplx a, cplx b) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (cplx v : branch_.values)
            d = std::min(d, segment_distance(a, b, v));
        return d;
    }

    cplx implicit_slope(cplx z, cplx w) const
    {
        const Partials d = partials(curve_, z, w);
        return -d.fz / d.fw;
    }

    /// Continues w from (a, w_a) to b along the straight segment.
    cplx march(cplx a, cplx w_a, cplx b) const
    {
        if (segment_clearance(a, b) < tol_.branch_standoff)
            throw Error(ErrorKind::standoff_violation, "segment passes within the branch standoff");
        const double total = std::abs(b - a);
        if (total == 0.0)
            return w_a;
        const cplx dir = (b - a) / total;
        double done = 0.0;
        cplx z = a, w = w_a;
        while (done < total) {
            double reach = distance_to_branch(z);
            if (!std::isfinite(reach))
                reach = 1.0 + std::abs(z);
            double step = 0.1 * reach;
            if (step < 1e-3 * tol_.branch_standoff)
                throw Error(ErrorKind::standoff_violation, "continuation step underflow near a branch value",
                            done / total);
            step = std::min(step, total - done);
            const bool last = done + step >= total;
            const cplx z_next = last ? b : z + step * dir;
            const cplx w_pred = w + implicit_slope(z, w) * (z_next - z);
            SurfacePoint corrected;
            try {
                corrected = project_to_surface(curve_, z_next, w_pred, tol_);
            } catch (const Error& e) {
                throw Error(ErrorKind::continuation_failure, e.detail(), done / total);
            }
            if (corrected.z != z_next)
                throw Error(ErrorKind::continuation_failure, "corrector left the fiber", done / total);
            z = z_next;
            w = corrected.w;
            done = last ? total : done + step;
        }
        return w;
    }

    ContinuationResult continue_w(const ZPath& path) const
    {
        validate(path);
        ContinuationResult out;
        cplx w = path.w_start;
        out.vertex_w.push_back(w);
        for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
            w = march(path.vertices[i], w, path.vertices[i + 1]);
            out.vertex_w.push_back(w);
        }
        out.w_end = w;
        return out;
    }

    /// All w with F(z, w) = c.
    std::vector<cplx> fiber(cplx z) const
    {
        const SeparableForm& form = *curve_.separable();
        std::vector<cplx> poly = form.p;
        poly[0] -= curve_.level() - horner(form.q, z);
        std::vector<cplx> roots = polynomial_roots(poly, tol_.root_merge);
        for (cplx& r : roots)
            r = project_to_surface(curve_, z, r, tol_).w;
        return roots;
    }

    /// Fiber over z ordered by sheet label. Labels are fixed at z = 0, sorted by
    /// argument (so w = +1 is sheet 0, w = -1 sheet 1 for w^2 + z^6 = 1), and
    /// carried to z along the straight segment when it is branch-free;
    /// otherwise the fiber over z itself is sorted by argument.
    std::vector<cplx> labeled_fiber(cplx z) const
    {
        std::vector<cplx> local = fiber(z);
        sort_by_argument(local);
        if (distance_to_branch(0.0) < tol_.branch_standoff || segment_clearance(0.0, z) < tol_.branch_standoff)
            return local;
        std::vector<cplx> base = fiber(0.0);
        sort_by_argument(base);
        std::vector<cplx> labeled;
        for (cplx w0 : base) {
            const cplx carried = march(0.0, w0, z);
            auto best = std::min_element(local.begin(), local.end(), [&](cplx a, cplx b) {
                return std::abs(a - carried) < std::abs(b - carried);
            });
            labeled.push_back(*best);
        }
        return labeled;
    }

    std::vector<int> monodromy(const std::vector<cplx>& loop) const
    {
        if (loop.size() < 2 || std::abs(loop.front() - loop.back()) > 1e-12)
            throw Error(ErrorKind::path_error, "monodromy needs a closed loop");
        const std::vector<cplx> sheets = labeled_fiber(loop.front());
        std::vector<int> perm;
        for (cplx w0 : sheets) {
            const cplx w1 = continue_w({loop, w0}).w_end;
            int match = -1;
            for (std::size_t j = 0; j < sheets.size(); ++j) {
                if (std::abs(w1 - sheets[j]) <= tol_.sheet_match) {
                    if (match >= 0)
                        throw Error(ErrorKind::resolution_failure, "ambiguous sheet match");
                    match = static_cast<int>(j);
                }
            }
            if (match < 0)
                throw Error(ErrorKind::resolution_failure, "continued value matches no sheet");
            perm.push_back(match);
        }
        return perm;
    }

private:
    void validate(const ZPath& path) const
    {
        if (path.vertices.empty())
            throw Error(ErrorKind::path_error, "path has no vertices");
        if (path.ends_at_branch)
            throw Error(ErrorKind::standoff_violation, "continuation cannot end on a branch value");
        for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
            if (path.vertices[i] == path.vertices[i + 1])
                throw Error(ErrorKind::path_error, "consecutive vertices coincide");
        if (residual(curve_, path.front(), path.w_start) > std::max(tol_.surface, 1e-8))
            throw Error(ErrorKind::path_error, "(z0, w_start) is not on the surface");
    }

    Curve curve_;
    Tolerances tol_;
    BranchData branch_;
};

inline ContinuationResult continue_w(const Curve& curve, const ZPath& path, const Tolerances& tol = {})
{
    return SheetTracker(curve, tol).continue_w(path);
}

inline std::vector<int> monodromy(const Curve& curve, const std::vector<cplx>& loop, const Tolerances& tol = {})
{
    return SheetTracker(curve, tol).monodromy(loop);
}

/// Closed polygonal loop of `sides` vertices on the circle |z - center| = radius,
/// starting at center + radius.
inline std::vector<cplx> circle_loop(cplx center, double radius, int sides = 64)
{
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<cplx> loop;
    for (int k = 0; k <= sides; ++k)
        loop.push_back(center + std::polar(radius, two_pi * (k % sides) / sides));
    return loop;
}

} // namespace riemann
