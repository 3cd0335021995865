#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "continuation.hpp"
#include "curve.hpp"

namespace riemann {

template <class Rng>
cplx random_disk_point(Rng& rng, double radius)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    return std::polar(r, 6.283185307179586476925286766559 * unit(rng));
}

/// Uniform z in the disk of `radius` kept `standoff` away from the branch
/// values, with w drawn uniformly from the fiber over z.
template <class Rng>
SurfacePoint random_surface_point(const SheetTracker& tracker, Rng& rng, double radius, double standoff)
{
    for (;;) {
        const cplx z = random_disk_point(rng, radius);
        if (tracker.distance_to_branch(z) < standoff)
            continue;
        const std::vector<cplx> fiber = tracker.fiber(z);
        std::uniform_int_distribution<std::size_t> pick(0, fiber.size() - 1);
        return make_point(tracker.curve(), z, fiber[pick(rng)]);
    }
}

} // namespace riemann
