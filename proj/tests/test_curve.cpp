#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "riemann/curve.hpp"
#include "riemann/sampling.hpp"

using namespace riemann;

namespace {

const Curve example = Curve::preset("w2z6");
constexpr double pi = 3.141592653589793238462643383280;

// Central-difference gradient of Re F or Im F over (Re z, Im z, Re w, Im w).
RealTangent fd_gradient(const Curve& curve, cplx z, cplx w, RealPart which)
{
    const double h = 1e-6;
    auto h_of = [&](cplx zz, cplx ww) {
        const cplx f = eval(curve, zz, ww);
        return which == RealPart::u ? f.real() : f.imag();
    };
    const std::array<std::pair<cplx, cplx>, 4> dirs{
        {{{1, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}}};
    RealTangent g{};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto [dz, dw] = dirs[k];
        g[k] = (h_of(z + h * dz, w + h * dw) - h_of(z - h * dz, w - h * dw)) / (2 * h);
    }
    return g;
}

// Solves Omega(X, .) = g with Omega written out as a 4x4 matrix
// (Re(dz ^ dw) = dx1 ^ dx2 - dy1 ^ dy2).
RealTangent fd_hamiltonian(const Curve& curve, cplx z, cplx w, RealPart which)
{
    Eigen::Matrix4d omega;
    omega << 0, 0, 1, 0,
             0, 0, 0, -1,
            -1, 0, 0, 0,
             0, 1, 0, 0;
    const RealTangent g = fd_gradient(curve, z, w, which);
    const Eigen::Vector4d x = omega.transpose().fullPivLu().solve(Eigen::Vector4d(g[0], g[1], g[2], g[3]));
    return {x(0), x(1), x(2), x(3)};
}

double max_diff(const RealTangent& a, const RealTangent& b)
{
    double d = 0;
    for (std::size_t k = 0; k < 4; ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

} // namespace

TEST(Curve, ExampleCoefficientsAndSeparableForm)
{
    ASSERT_TRUE(example.separable().has_value());
    EXPECT_EQ(example.level(), cplx(1.0));
    EXPECT_EQ(example.total_degree(), 6);
    const auto& form = *example.separable();
    ASSERT_EQ(form.p.size(), 3u);
    ASSERT_EQ(form.q.size(), 7u);
    EXPECT_EQ(form.p[2], cplx(1.0));
    EXPECT_EQ(form.q[6], cplx(1.0));
}

TEST(Curve, RejectsDegenerateTables)
{
    EXPECT_THROW(Curve({}, 1.0), Error);
    EXPECT_THROW(Curve::from_terms({{0, 0, 3.0}}, 1.0), Error);
    EXPECT_THROW(Curve::preset("nope"), Error);
}

TEST(Curve, SeparableFormReproducesTable)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> deg(0, 5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Term> terms;
        for (int k = 0; k < 6; ++k) {
            const int a = deg(rng);
            terms.push_back(trial % 2 == 0 ? Term{a, 0, {g(rng), g(rng)}} : Term{0, a, {g(rng), g(rng)}});
        }
        terms.push_back({0, 1, 1.0});
        const Curve c = Curve::from_terms(terms, 0.5);
        ASSERT_TRUE(c.separable());
        for (int s = 0; s < 5; ++s) {
            const cplx z{g(rng), g(rng)}, w{g(rng), g(rng)};
            const cplx sep = horner(c.separable()->p, w) + horner(c.separable()->q, z);
            EXPECT_LT(std::abs(sep - eval(c, z, w)), 1e-12 * (1 + std::abs(sep)));
        }
    }
    EXPECT_FALSE(Curve::from_terms({{1, 1, 1.0}, {0, 2, 1.0}}, 1.0).separable());
}

TEST(Curve, Eval)
{
    EXPECT_EQ(eval(example, 0.0, 1.0), cplx(1.0));
    EXPECT_EQ(eval(example, 1.0, 0.0), cplx(1.0));
    EXPECT_EQ(eval(example, 1.0, 1.0), cplx(2.0));
}

TEST(Curve, Partials)
{
    Partials d = partials(example, 0.0, 0.0);
    EXPECT_EQ(d.fz, cplx(0.0));
    EXPECT_EQ(d.fw, cplx(0.0));
    d = partials(example, 1.0, 1.0);
    EXPECT_EQ(d.fz, cplx(6.0));
    EXPECT_EQ(d.fw, cplx(2.0));
    d = partials(example, cplx(0, 1), 2.0);
    EXPECT_LT(std::abs(d.fz - cplx(0, 6)), 1e-15);
    EXPECT_EQ(d.fw, cplx(4.0));
}

TEST(Curve, PartialsMatchFiniteDifferences)
{
    const Curve mixed = Curve::from_terms({{2, 1, {1, 2}}, {0, 3, 1.0}, {1, 0, -0.5}, {3, 2, {0, 1}}}, 0.0);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const cplx z = random_disk_point(rng, 1.0), w = random_disk_point(rng, 1.0);
        const double h = 1e-6;
        const cplx fz = (eval(mixed, z + h, w) - eval(mixed, z - h, w)) / (2 * h);
        const cplx fw = (eval(mixed, z, w + h) - eval(mixed, z, w - h)) / (2 * h);
        const Partials d = partials(mixed, z, w);
        EXPECT_LT(std::abs(d.fz - fz), 1e-8);
        EXPECT_LT(std::abs(d.fw - fw), 1e-8);
    }
}

TEST(Curve, HamiltonianField)
{
    ComplexField f = hamiltonian_field(example, 0.0, 1.0);
    EXPECT_EQ(f.dz, cplx(2.0));
    EXPECT_EQ(f.dw, cplx(0.0));
    f = hamiltonian_field(example, 1.0, 0.0);
    EXPECT_EQ(f.dz, cplx(0.0));
    EXPECT_EQ(f.dw, cplx(-6.0));
    f = hamiltonian_field(example, 0.0, 0.0);
    EXPECT_EQ(f.dz, cplx(0.0));
    EXPECT_EQ(f.dw, cplx(0.0));
}

TEST(Curve, FieldIsTangentToLevelSets)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const cplx z = random_disk_point(rng, 2.0), w = random_disk_point(rng, 2.0);
        const Partials d = partials(example, z, w);
        const ComplexField f = hamiltonian_field(example, z, w);
        EXPECT_EQ(f.dz, d.fw);
        EXPECT_EQ(f.dw, -d.fz);
        EXPECT_LE(std::abs(d.fz * f.dz + d.fw * f.dw), 1e-12);
    }
}

TEST(Curve, RegularValue)
{
    RegularityReport r = is_regular_value(example);
    EXPECT_TRUE(r.regular);
    ASSERT_EQ(r.critical_points.size(), 1u);
    EXPECT_EQ(r.critical_points[0].z, cplx(0.0));
    EXPECT_EQ(r.critical_points[0].w, cplx(0.0));

    EXPECT_FALSE(is_regular_value(example.with_level(0.0)).regular);

    r = is_regular_value(Curve::preset("w2z2"));
    EXPECT_TRUE(r.regular);
    ASSERT_EQ(r.critical_points.size(), 1u);
    EXPECT_EQ(r.critical_points[0].value, cplx(0.0));

    EXPECT_THROW(
        {
            try {
                is_regular_value(Curve::from_terms({{1, 1, 1.0}}, 1.0));
            } catch (const Error& e) {
                EXPECT_EQ(e.kind(), ErrorKind::unsupported_form);
                throw;
            }
        },
        Error);
}

TEST(Curve, BranchPointsOfExample)
{
    const BranchData b = branch_points(example);
    EXPECT_TRUE(b.regular);
    ASSERT_EQ(b.points.size(), 6u);
    ASSERT_EQ(b.values.size(), 6u);
    for (int k = 0; k < 6; ++k) {
        const cplx zk = std::polar(1.0, 2 * pi * k / 6);
        int hits = 0;
        for (const SurfacePoint& p : b.points) {
            if (std::abs(p.z - zk) < 1e-12) {
                ++hits;
                EXPECT_EQ(p.w, cplx(0.0));
                EXPECT_LE(p.residual, 1e-12);
                EXPECT_FALSE(p.sheet.has_value());
            }
        }
        EXPECT_EQ(hits, 1) << "k=" << k;
    }
}

TEST(Curve, BranchPointsOfSmallCurves)
{
    BranchData b = branch_points(Curve::preset("w2z2"));
    ASSERT_EQ(b.values.size(), 2u);
    for (cplx v : b.values)
        EXPECT_LT(std::abs(std::abs(v.real()) - 1.0) + std::abs(v.imag()), 1e-14);

    b = branch_points(Curve::from_terms({{0, 2, 1.0}, {1, 0, -1.0}}, 0.0));
    ASSERT_EQ(b.points.size(), 1u);
    EXPECT_EQ(b.points[0].z, cplx(0.0));
    EXPECT_EQ(b.points[0].w, cplx(0.0));
    // dF = (-1, 2w) never vanishes, so the branch point sits on a smooth level set.
    EXPECT_TRUE(b.regular);
}

TEST(Curve, RealHamiltonianExamples)
{
    const SurfacePoint p = make_point(example, 0.0, 1.0);
    const RealTangent xu = real_hamiltonian(example, p, RealPart::u);
    const RealTangent xv = real_hamiltonian(example, p, RealPart::v);
    EXPECT_LT(max_diff(xu, {2, 0, 0, 0}), 1e-15);
    EXPECT_LT(max_diff(xv, {0, -2, 0, 0}), 1e-15);
    // Finite-difference oracle, Omega inverted as a matrix.
    EXPECT_LT(max_diff(xu, fd_hamiltonian(example, 0.0, 1.0, RealPart::u)), 1e-8);
    EXPECT_LT(max_diff(xv, fd_hamiltonian(example, 0.0, 1.0, RealPart::v)), 1e-8);

    const SurfacePoint crit = make_point(example, 0.0, 0.0);
    EXPECT_LT(max_diff(real_hamiltonian(example, crit, RealPart::u), {0, 0, 0, 0}), 1e-300);
}

TEST(Curve, RealHamiltonianMatchesFiniteDifferenceOracle)
{
    const Curve mixed = Curve::from_terms({{2, 1, {1, 2}}, {0, 3, 1.0}, {1, 0, -0.5}}, 0.0);
    std::mt19937_64 rng(3);
    for (const Curve* c : {&example, &mixed}) {
        for (int i = 0; i < 40; ++i) {
            const cplx z = random_disk_point(rng, 1.2), w = random_disk_point(rng, 1.2);
            const SurfacePoint p{z, w, 0.0, std::nullopt};
            for (RealPart which : {RealPart::u, RealPart::v})
                EXPECT_LT(max_diff(real_hamiltonian(*c, p, which), fd_hamiltonian(*c, z, w, which)), 1e-7);
        }
    }
}

TEST(Curve, RealFieldsAreRealAndImaginaryPartsOfXF)
{
    const SheetTracker tracker(example);
    std::mt19937_64 rng(9);
    int global_sign = 0;
    for (int i = 0; i < 100; ++i) {
        const SurfacePoint p = random_surface_point(tracker, rng, 1.5, 1e-3);
        const ComplexField f = hamiltonian_field(example, p.z, p.w);
        EXPECT_LE(max_diff(real_hamiltonian(example, p, RealPart::u), embed(f)), 1e-12);

        const int s = imaginary_field_sign(example, p);
        if (i == 0)
            global_sign = s;
        EXPECT_EQ(s, global_sign);
        RealTangent scaled = embed({cplx(0, 1) * f.dz, cplx(0, 1) * f.dw});
        for (double& v : scaled)
            v *= global_sign;
        EXPECT_LE(max_diff(real_hamiltonian(example, p, RealPart::v), scaled), 1e-12);

        const RealTangent xu = real_hamiltonian(example, p, RealPart::u);
        const RealTangent xv = real_hamiltonian(example, p, RealPart::v);
        double norm = 0;
        for (std::size_t k = 0; k < 4; ++k)
            norm += xu[k] * xu[k] + xv[k] * xv[k];
        EXPECT_GT(independence_margin(xu, xv), 1e-9 * std::sqrt(norm));
    }
    // Omega(X, .) = dh with Omega = Re(dz ^ dw) forces X_v = -embed(i X_F).
    EXPECT_EQ(global_sign, -1);
}

TEST(Curve, PoissonBracketVanishes)
{
    EXPECT_EQ(poisson_bracket(example, make_point(example, 0.0, 1.0)), 0.0);
    const SheetTracker tracker(example);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i)
        EXPECT_LE(std::abs(poisson_bracket(example, random_surface_point(tracker, rng, 1.5, 1e-3))), 1e-9);

    const Curve linear = Curve::from_terms({{0, 1, 1.0}}, 0.0);
    EXPECT_EQ(poisson_bracket(linear, {0.3, 0.0, 0.0, std::nullopt}), 0.0);
}
