// Flow a point on w^2 + z^6 = 1, map it with delta, and reduce the image to
// the fundamental hexagon.

#include <iostream>

#include "riemann/abelian_map.hpp"
#include "riemann/flow.hpp"
#include "riemann/tiling.hpp"

int main()
{
    using namespace riemann;
    const Curve curve = Curve::preset("w2z6");
    const SheetTracker tracker(curve);

    const MapConstants k = map_constants(tracker);
    std::cout << "alpha = " << k.alpha << ", L = " << k.edge_length << ", C = " << k.c_full << "\n";

    const SurfacePoint start = make_point(curve, {0.2, 0.1}, tracker.fiber({0.2, 0.1}).front());
    const FlowTrace trace = integrate_flow(curve, start, 1.0, 0.5);
    std::cout << "flowed to z = " << trace.end().z << ", w = " << trace.end().w << ", drift " << trace.max_drift << "\n";

    const ZPath base = sheet_path(tracker, start);
    std::cout << "straightening residual " << straightening_residual(tracker, trace, base) << "\n";

    const cplx zeta = delta(tracker, start, base).zeta;
    const Reduction r = reduce_to_fundamental(HexLayout(k.edge_length), zeta + 3.0 * k.alpha);
    std::cout << "zeta = " << zeta << ", shifted image reduces to " << r.q << " with lattice offset (" << r.lattice.m
              << ", " << r.lattice.n << ")\n";
}
