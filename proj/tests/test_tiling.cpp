#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "riemann/tiling.hpp"

using namespace riemann;

namespace {

std::vector<cplx> random_points(std::mt19937_64& rng, int n, double radius)
{
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
        const cplx p{u(rng), u(rng)};
        if (std::abs(p) <= radius)
            out.push_back(p);
    }
    return out;
}

bool same_map(const PlanarIsometry& a, const PlanarIsometry& b, const std::vector<cplx>& probes)
{
    return map_distance(a, b, probes) <= 1e-12;
}

// Exhaustive nearest lattice point among all lattice points within |p| + 2 edge.
double brute_force_distance(const HexLayout& layout, cplx p)
{
    const double reach = std::abs(p) + 2 * layout.edge();
    const auto bound = static_cast<std::int64_t>(std::ceil(2 * reach / std::abs(layout.u(0)))) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t m = -bound; m <= bound; ++m)
        for (std::int64_t n = -bound; n <= bound; ++n) {
            const cplx l = layout.lattice_point({m, n});
            if (std::abs(l) <= reach + layout.edge())
                best = std::min(best, std::abs(p - l));
        }
    return best;
}

} // namespace

TEST(Isometry, DihedralRelations)
{
    std::mt19937_64 rng(1);
    const auto probes = random_points(rng, 10, 3.0);
    const auto R = PlanarIsometry::R(), U = PlanarIsometry::U();
    EXPECT_TRUE(same_map(power(R, 6), PlanarIsometry::identity(), probes));
    EXPECT_TRUE(same_map(compose(U, U), PlanarIsometry::identity(), probes));
    EXPECT_TRUE(same_map(compose(R, U), compose(U, inverse(R)), probes));
}

TEST(Isometry, ComposeAndInverse)
{
    std::mt19937_64 rng(2);
    const auto probes = random_points(rng, 10, 3.0);
    const PlanarIsometry a{true, std::polar(1.0, 0.7), {0.3, -1.2}};
    const PlanarIsometry b{false, std::polar(1.0, -2.1), {1.5, 0.4}};
    const PlanarIsometry c{true, std::polar(1.0, 1.9), {-0.2, 0.8}};
    for (cplx z : probes) {
        EXPECT_LT(std::abs(compose(a, b)(z) - a(b(z))), 1e-14);
        EXPECT_LT(std::abs(compose(inverse(a), a)(z) - z), 1e-14);
        EXPECT_LT(std::abs(compose(b, inverse(b))(z) - z), 1e-14);
    }
    EXPECT_TRUE(same_map(compose(compose(a, b), c), compose(a, compose(b, c)), probes));
}

TEST(Isometry, DihedralGroup)
{
    const auto group = dihedral_group();
    ASSERT_EQ(group.size(), 12u);
    int reflections = 0;
    for (const auto& g : group) {
        EXPECT_NEAR(std::abs(g.rot), 1.0, 1e-12);
        if (g.reflect) {
            ++reflections;
            EXPECT_EQ(isometry_order(g), 2);
        } else {
            EXPECT_EQ(6 % isometry_order(g), 0);
        }
    }
    EXPECT_EQ(reflections, 6);
    for (std::size_t i = 0; i < group.size(); ++i)
        for (std::size_t j = i + 1; j < group.size(); ++j)
            EXPECT_GT(map_distance(group[i], group[j], generic_probes()), 1e-6);
}

TEST(HexLayout, TranslationVectors)
{
    const HexLayout layout(1.3);
    for (int k = 0; k < 6; ++k) {
        EXPECT_LT(std::abs(layout.u(k + 3) + layout.u(k)), 1e-14);
        const auto [a, b] = layout.lattice_coords(layout.u(k));
        EXPECT_NEAR(a, std::round(a), 1e-9);
        EXPECT_NEAR(b, std::round(b), 1e-9);
        // Apexes sit at distance sqrt3 edge, twice the apothem.
        EXPECT_NEAR(std::abs(layout.u(k)), 2 * layout.apothem(), 1e-14);
    }
    EXPECT_LT(std::abs(layout.u(0) + layout.u(2) + layout.u(4)), 1e-14);
}

TEST(Reduce, Examples)
{
    const HexLayout layout(1.0);
    const Reduction zero = reduce_to_fundamental(layout, 0.0);
    EXPECT_EQ(zero.q, cplx(0.0));
    EXPECT_EQ(zero.lattice, (LatticeCoords{0, 0}));
    const Reduction u0 = reduce_to_fundamental(layout, layout.u(0));
    EXPECT_LT(std::abs(u0.q), 1e-14);
    EXPECT_EQ(u0.lattice, (LatticeCoords{1, 0}));
    // Boundary midpoint between 0 and u_0: the lexicographically smaller (0,0).
    const Reduction mid = reduce_to_fundamental(layout, 0.5 * layout.u(0));
    EXPECT_EQ(mid.lattice, (LatticeCoords{0, 0}));
}

TEST(Reduce, MatchesBruteForceNearestLattice)
{
    const HexLayout layout(0.6071);
    std::mt19937_64 rng(2024);
    for (cplx p : random_points(rng, 10000, 50 * layout.edge())) {
        const Reduction r = reduce_to_fundamental(layout, p);
        ASSERT_LE(layout.distance_outside(r.q), 1e-9) << p;
        const auto [a, b] = layout.lattice_coords(p - r.q);
        ASSERT_NEAR(a, static_cast<double>(r.lattice.m), 1e-9);
        ASSERT_NEAR(b, static_cast<double>(r.lattice.n), 1e-9);
        ASSERT_NEAR(std::abs(r.q), brute_force_distance(layout, p), 1e-9);
    }
}

TEST(Reduce, Idempotent)
{
    const HexLayout layout(1.0);
    std::mt19937_64 rng(5);
    for (cplx p : random_points(rng, 1000, 20.0)) {
        const Reduction once = reduce_to_fundamental(layout, p);
        const Reduction twice = reduce_to_fundamental(layout, once.q);
        EXPECT_EQ(twice.q, once.q);
        EXPECT_EQ(twice.lattice, (LatticeCoords{0, 0}));
    }
}

TEST(Coverage, Reports)
{
    const HexLayout layout(1.0);
    std::mt19937_64 rng(7);
    const CoverageReport big = coverage_check(layout, 10000, 50.0, rng);
    EXPECT_EQ(big.failures, 0u);
    EXPECT_LE(big.max_outside, 1e-9);
    EXPECT_LE(big.max_lattice_residual, 1e-9);
    const CoverageReport origin = coverage_check(layout, 1, 0.0, rng);
    EXPECT_EQ(origin.failures, 0u);
}

TEST(Stellated, Shape)
{
    const HexLayout layout(0.8);
    const Polygon K = layout.stellated();
    ASSERT_EQ(K.size(), 12u);
    EXPECT_NEAR(polygon_area(K) / polygon_area(layout.hexagon()), 2.0, 1e-9);
    // Apex k of K is the far vertex of the erected triangle on edge k.
    for (int k = 0; k < 6; ++k) {
        const Polygon tri = layout.erected_triangle(k);
        EXPECT_NEAR(polygon_area(tri), polygon_area(layout.triangle()), 1e-12);
        const cplx a = layout.hexagon()[static_cast<std::size_t>(k)];
        const cplx b = layout.hexagon()[static_cast<std::size_t>((k + 1) % 6)];
        for (cplx target : {a, b, layout.u(k)}) {
            double best = 1e300;
            for (cplx v : tri)
                best = std::min(best, std::abs(v - target));
            EXPECT_LT(best, 1e-12) << "edge " << k;
        }
    }
    std::mt19937_64 rng(8);
    int checked = 0;
    for (cplx p : random_points(rng, 3000, layout.edge())) {
        if (!layout.contains(p, 0.0))
            continue;
        EXPECT_TRUE(polygon_contains(K, p));
        ++checked;
    }
    EXPECT_GE(checked, 1000);
}

TEST(Stellated, PiecesOutsideHexagonTranslateIntoIt)
{
    const HexLayout layout(1.0);
    std::mt19937_64 rng(9);
    int checked = 0;
    for (cplx x : random_points(rng, 20000, 2 * layout.edge())) {
        if (!polygon_contains(layout.stellated(), x) || layout.contains(x, 1e-12))
            continue;
        const auto k = stellated_piece(layout, x);
        ASSERT_TRUE(k.has_value()) << x;
        EXPECT_TRUE(layout.contains(x - layout.u(*k)));
        const Reduction r = reduce_to_fundamental(layout, x);
        EXPECT_LT(std::abs(r.q - (x - layout.u(*k))), 1e-12);
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Stellated, StatedIndexMisplacesTriangles)
{
    // tau_k(R^{(4+k) mod 6} T) keeps only the apex u_k and touches no vertex of
    // H, while tau_k(R^{(k+2) mod 6} T) shares both endpoints of edge k.
    const HexLayout layout(1.0);
    auto hexagon_vertices_hit = [&](const Polygon& tri) {
        int hits = 0;
        for (cplx v : tri)
            for (cplx h : layout.hexagon())
                hits += std::abs(v - h) < 1e-12;
        return hits;
    };
    for (int k = 0; k < 6; ++k) {
        EXPECT_EQ(hexagon_vertices_hit(layout.translated_rotated_triangle(k, (4 + k) % 6)), 0);
        EXPECT_EQ(hexagon_vertices_hit(layout.erected_triangle(k)), 2);
    }
}
