#pragma once

// Univariate complex polynomials in ascending-coefficient form and their roots.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

namespace riemann {

using cplx = std::complex<double>;

inline cplx horner(std::span<const cplx> coeffs, cplx x)
{
    cplx acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

inline std::vector<cplx> derivative(std::span<const cplx> coeffs)
{
    if (coeffs.size() <= 1)
        return {};
    std::vector<cplx> out(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        out[k - 1] = static_cast<double>(k) * coeffs[k];
    return out;
}

inline std::vector<cplx> trimmed(std::span<const cplx> coeffs)
{
    std::vector<cplx> out(coeffs.begin(), coeffs.end());
    while (!out.empty() && out.back() == cplx{})
        out.pop_back();
    return out;
}

namespace detail {

inline void polish_root(std::span<const cplx> coeffs, std::span<const cplx> dcoeffs, cplx& root)
{
    for (int it = 0; it < 3; ++it) {
        const cplx d = horner(dcoeffs, root);
        if (std::abs(d) == 0.0)
            return;
        const cplx step = horner(coeffs, root) / d;
        const cplx next = root - step;
        if (!(std::abs(horner(coeffs, next)) < std::abs(horner(coeffs, root))))
            return;
        root = next;
    }
}

} // namespace detail

/// Distinct roots of the polynomial with ascending coefficients `coeffs`.
/// Zero roots are split off exactly, the rest come from the eigenvalues of the
/// companion matrix followed by a Newton polish. Roots closer than
/// `merge_tol` are merged into their mean.
inline std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, double merge_tol = 1e-8)
{
    std::vector<cplx> poly = trimmed(coeffs);
    std::vector<cplx> roots;
    if (poly.size() <= 1)
        return roots;

    std::size_t zeros = 0;
    while (zeros < poly.size() && poly[zeros] == cplx{})
        ++zeros;
    if (zeros > 0) {
        roots.push_back(cplx{});
        poly.erase(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(zeros));
    }

    const std::size_t n = poly.size() - 1;
    if (n == 1) {
        roots.push_back(-poly[0] / poly[1]);
    } else if (n > 1) {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 1; i < n; ++i)
            companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -poly[i] / poly[n];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        const std::vector<cplx> dpoly = derivative(poly);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            cplx r = solver.eigenvalues()(i);
            detail::polish_root(poly, dpoly, r);
            roots.push_back(r);
        }
    }

    // Greedy clustering; clusters of a multiple root collapse to their mean.
    std::vector<cplx> merged;
    std::vector<int> counts;
    for (const cplx& r : roots) {
        bool absorbed = false;
        for (std::size_t j = 0; j < merged.size(); ++j) {
            if (std::abs(merged[j] - r) <= merge_tol) {
                merged[j] = (merged[j] * static_cast<double>(counts[j]) + r) / static_cast<double>(counts[j] + 1);
                ++counts[j];
                absorbed = true;
                break;
            }
        }
        if (!absorbed) {
            merged.push_back(r);
            counts.push_back(1);
        }
    }
    return merged;
}

/// Sort key used wherever a canonical order of fiber values is needed:
/// argument in [0, 2pi), then modulus.
inline void sort_by_argument(std::vector<cplx>& values)
{
    constexpr double two_pi = 6.283185307179586476925286766559;
    auto key = [](cplx v) {
        double a = std::arg(v);
        if (a < -1e-14)
            a += two_pi;
        if (a < 0.0 || a >= two_pi - 1e-14)
            a = 0.0;
        return a;
    };
    std::sort(values.begin(), values.end(), [&](cplx a, cplx b) {
        const double ka = key(a), kb = key(b);
        if (std::abs(ka - kb) > 1e-12)
            return ka < kb;
        return std::abs(a) < std::abs(b);
    });
}

} // namespace riemann
