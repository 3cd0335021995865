#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace riemann {

template <std::size_t N>
struct GaussLegendreRule {
    std::array<double, N> nodes{};    // ascending in [-1, 1]
    std::array<double, N> weights{};
};

/// N-point Gauss-Legendre rule on [-1, 1] from Newton iteration on P_N.
template <std::size_t N>
GaussLegendreRule<N> make_gauss_legendre()
{
    static_assert(N >= 1);
    constexpr double pi = 3.141592653589793238462643383280;
    GaussLegendreRule<N> rule;
    const std::size_t half = (N + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= N; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[N - 1 - i] = x;
        rule.weights[N - 1 - i] = w;
    }
    return rule;
}

inline const GaussLegendreRule<16>& gauss_legendre_16()
{
    static const GaussLegendreRule<16> rule = make_gauss_legendre<16>();
    return rule;
}

} // namespace riemann
