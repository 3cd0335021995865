#pragma once

namespace riemann {

struct Tolerances {
    double surface = 1e-10;         // |F(z,w) - c| accepted as "on the surface"
    double root = 1e-10;            // critical value == c test
    double root_merge = 1e-8;       // duplicate root merging
    double branch_standoff = 1e-3;  // minimum distance of a path from a branch value
    double quad = 1e-12;            // adaptive quadrature bisection threshold
    double critical_standoff = 1e-6;
    double drift = 1e-8;            // largest |F - c| a flow sample may carry
    double sheet_match = 1e-6;      // endpoint matching for monodromy / sheet checks
    int newton_max_iter = 50;
    int quad_max_depth = 40;
};

} // namespace riemann
