#pragma once

// Planar isometries (rotation R, reflection U, lattice translations), the
// regular hexagon H with its translation lattice and the stellated hexagon K.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "polynomial.hpp"

namespace riemann {

namespace constants {
inline constexpr double pi = 3.141592653589793238462643383280;
inline constexpr double sqrt3 = 1.732050807568877293527446341506;
} // namespace constants

/// z -> rot * z + trans, or rot * conj(z) + trans when `reflect` is set.
struct PlanarIsometry {
    bool reflect = false;
    cplx rot{1.0, 0.0};
    cplx trans{0.0, 0.0};

    cplx operator()(cplx z) const { return rot * (reflect ? std::conj(z) : z) + trans; }

    static PlanarIsometry identity() { return {}; }
    static PlanarIsometry rotation(double angle) { return {false, std::polar(1.0, angle), {}}; }
    static PlanarIsometry translation(cplx t) { return {false, {1.0, 0.0}, t}; }
    /// z -> exp(2 pi i / 6) z
    static PlanarIsometry R() { return rotation(constants::pi / 3.0); }
    /// z -> conj(z)
    static PlanarIsometry U() { return {true, {1.0, 0.0}, {}}; }
};

/// (a o b)(z) = a(b(z)).
inline PlanarIsometry compose(const PlanarIsometry& a, const PlanarIsometry& b)
{
    auto sigma = [&](cplx x) { return a.reflect ? std::conj(x) : x; };
    return {a.reflect != b.reflect, a.rot * sigma(b.rot), a.rot * sigma(b.trans) + a.trans};
}

inline PlanarIsometry inverse(const PlanarIsometry& g)
{
    // z = rot * sigma(y) + trans  =>  y = sigma(conj(rot) * (z - trans))
    if (!g.reflect)
        return {false, std::conj(g.rot), -std::conj(g.rot) * g.trans};
    return {true, g.rot, -g.rot * std::conj(g.trans)};
}

inline PlanarIsometry power(const PlanarIsometry& g, int n)
{
    PlanarIsometry out;
    const PlanarIsometry base = n >= 0 ? g : inverse(g);
    for (int k = 0; k < std::abs(n); ++k)
        out = compose(out, base);
    return out;
}

/// Largest displacement between the two maps over `probes`.
inline double map_distance(const PlanarIsometry& a, const PlanarIsometry& b, const std::vector<cplx>& probes)
{
    double d = 0.0;
    for (cplx z : probes)
        d = std::max(d, std::abs(a(z) - b(z)));
    return d;
}

inline const std::vector<cplx>& generic_probes()
{
    static const std::vector<cplx> probes{{0.3, 0.1}, {-0.7, 0.2}, {0.11, -0.9}};
    return probes;
}

/// The 12 elements R^k and R^k U of the dihedral group of the hexagon.
inline std::vector<PlanarIsometry> dihedral_group()
{
    std::vector<PlanarIsometry> out;
    auto add = [&](const PlanarIsometry& g) {
        for (const PlanarIsometry& h : out)
            if (map_distance(g, h, generic_probes()) <= 1e-9)
                return;
        out.push_back(g);
    };
    for (int k = 0; k < 6; ++k) {
        const PlanarIsometry rk = power(PlanarIsometry::R(), k);
        add(rk);
        add(compose(rk, PlanarIsometry::U()));
    }
    return out;
}

/// Smallest n >= 1 with g^n = id (as maps), or 0 if none up to `limit`.
inline int isometry_order(const PlanarIsometry& g, int limit = 64)
{
    PlanarIsometry acc = g;
    for (int n = 1; n <= limit; ++n) {
        if (map_distance(acc, PlanarIsometry::identity(), generic_probes()) <= 1e-9)
            return n;
        acc = compose(g, acc);
    }
    return 0;
}

using Polygon = std::vector<cplx>;

inline double polygon_area(const Polygon& poly)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const cplx a = poly[i], b = poly[(i + 1) % poly.size()];
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * std::abs(twice);
}

/// Closed point-in-polygon test (boundary within `tol` counts as inside).
inline bool polygon_contains(const Polygon& poly, cplx p, double tol = 1e-12)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const cplx a = poly[i], b = poly[j];
        const cplx ab = b - a;
        const double len2 = std::norm(ab);
        const double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
        if (std::abs(a + t * ab - p) <= tol)
            return true;
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
            if (p.real() < x)
                inside = !inside;
        }
    }
    return inside;
}

struct LatticeCoords {
    std::int64_t m = 0;
    std::int64_t n = 0;
    friend bool operator==(const LatticeCoords&, const LatticeCoords&) = default;
};

/// Regular hexagon H of the given edge length centred at 0 with a vertex on the
/// positive real axis, its translation lattice spanned by u_0, u_1 and the
/// boundary triangle T = {0, edge e^{i pi/3}, edge e^{2 i pi/3}}.
class HexLayout {
public:
    explicit HexLayout(double edge) : edge_(edge)
    {
        for (int k = 0; k < 6; ++k) {
            hexagon_[static_cast<std::size_t>(k)] = std::polar(edge, k * constants::pi / 3.0);
            u_[static_cast<std::size_t>(k)] =
                std::polar(constants::sqrt3 * edge, 2.0 * constants::pi * (1.0 / 12.0 + k / 6.0));
        }
    }

    double edge() const noexcept { return edge_; }
    double apothem() const noexcept { return 0.5 * constants::sqrt3 * edge_; }
    const std::array<cplx, 6>& u() const noexcept { return u_; }
    cplx u(int k) const { return u_[static_cast<std::size_t>(((k % 6) + 6) % 6)]; }

    Polygon hexagon() const { return {hexagon_.begin(), hexagon_.end()}; }
    Polygon triangle() const { return {0.0, hexagon_[1], hexagon_[2]}; }

    cplx lattice_point(LatticeCoords c) const
    {
        return static_cast<double>(c.m) * u_[0] + static_cast<double>(c.n) * u_[1];
    }

    /// Real coordinates (a, b) with p = a u_0 + b u_1.
    std::array<double, 2> lattice_coords(cplx p) const
    {
        const cplx e0 = u_[0], e1 = u_[1];
        const double det = e0.real() * e1.imag() - e1.real() * e0.imag();
        return {(p.real() * e1.imag() - e1.real() * p.imag()) / det,
                (e0.real() * p.imag() - p.real() * e0.imag()) / det};
    }

    /// How far p lies outside the closed hexagon (0 inside).
    double distance_outside(cplx p) const
    {
        double worst = 0.0;
        for (int k = 0; k < 6; ++k) {
            const cplx normal = std::polar(1.0, constants::pi / 6.0 + k * constants::pi / 3.0);
            worst = std::max(worst, (p * std::conj(normal)).real() - apothem());
        }
        return worst;
    }

    bool contains(cplx p, double tol = 1e-9) const { return distance_outside(p) <= tol; }

    /// Outward equilateral triangle on edge k of H (between vertices k and k+1):
    /// the translate tau_k of the rotated boundary triangle R^{(k+2) mod 6} T.
    Polygon erected_triangle(int k) const { return translated_rotated_triangle(k, (k + 2) % 6); }

    /// tau_k(R^j T) for arbitrary j.
    Polygon translated_rotated_triangle(int k, int j) const
    {
        Polygon tri = triangle();
        const cplx rot = std::polar(1.0, j * constants::pi / 3.0);
        for (cplx& v : tri)
            v = rot * v + u(k);
        return tri;
    }

    /// 12-gon alternating hexagon vertices and triangle apexes u_k.
    Polygon stellated() const
    {
        Polygon star;
        for (int k = 0; k < 6; ++k) {
            star.push_back(hexagon_[static_cast<std::size_t>(k)]);
            star.push_back(u_[static_cast<std::size_t>(k)]);
        }
        return star;
    }

private:
    double edge_;
    std::array<cplx, 6> hexagon_{};
    std::array<cplx, 6> u_{};
};

struct Reduction {
    cplx q;
    LatticeCoords lattice;
};

/// Representative of p in the closed hexagon H: the Voronoi-nearest lattice
/// point among the 7 around the rounded lattice coordinates, ties broken by the
/// lexicographically smallest (m, n).
inline Reduction reduce_to_fundamental(const HexLayout& layout, cplx p)
{
    const auto [a, b] = layout.lattice_coords(p);
    const auto m0 = static_cast<std::int64_t>(std::llround(a));
    const auto n0 = static_cast<std::int64_t>(std::llround(b));
    static constexpr std::array<std::array<int, 2>, 7> offsets{
        {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};
    const double tie = 1e-12 * std::max(1.0, std::abs(p));

    Reduction best{p, {m0, n0}};
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& off : offsets) {
        const LatticeCoords c{m0 + off[0], n0 + off[1]};
        const double d = std::abs(p - layout.lattice_point(c));
        const bool better = d < best_d - tie;
        const bool tied = std::abs(d - best_d) <= tie;
        const bool smaller = c.m < best.lattice.m || (c.m == best.lattice.m && c.n < best.lattice.n);
        if (better || (tied && smaller)) {
            if (better)
                best_d = d;
            best = {p - layout.lattice_point(c), c};
        }
    }
    return best;
}

struct CoverageReport {
    std::size_t samples = 0;
    std::size_t failures = 0;
    double max_outside = 0.0;           // worst distance of a representative outside H
    double max_lattice_residual = 0.0;  // worst non-integrality of p - q in lattice coordinates
};

/// Samples p uniformly in the disk |p| <= radius and checks that every
/// reduction lands in H with p - q in the lattice.
template <class Rng>
CoverageReport coverage_check(const HexLayout& layout, std::size_t samples, double radius, Rng& rng,
                              double tol = 1e-9)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CoverageReport report;
    report.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        const cplx p = std::polar(radius * std::sqrt(unit(rng)), 2.0 * constants::pi * unit(rng));
        const Reduction r = reduce_to_fundamental(layout, p);
        const auto [a, b] = layout.lattice_coords(p - r.q);
        const double lattice_res = std::max(std::abs(a - static_cast<double>(r.lattice.m)),
                                            std::abs(b - static_cast<double>(r.lattice.n)));
        const double outside = layout.distance_outside(r.q);
        report.max_outside = std::max(report.max_outside, outside);
        report.max_lattice_residual = std::max(report.max_lattice_residual, lattice_res);
        if (outside > tol || lattice_res > tol)
            ++report.failures;
    }
    return report;
}

/// For x in K \ H, the k with x in the erected triangle on edge k; x - u_k then
/// lies in H.
inline std::optional<int> stellated_piece(const HexLayout& layout, cplx x, double tol = 1e-12)
{
    for (int k = 0; k < 6; ++k)
        if (polygon_contains(layout.erected_triangle(k), x, tol))
            return k;
    return std::nullopt;
}

} // namespace riemann
