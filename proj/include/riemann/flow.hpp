#pragma once

// Integration of the holomorphic Hamiltonian flow dz/dt = d F_w, dw/dt = -d F_z
// on the level set S = {F = c} for a unit complex time direction d.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "tolerances.hpp"

namespace riemann {

/// Newton projection of (z, w_guess) onto S with z frozen. Falls back to the
/// least-norm joint (z, w) update when |F_w| < 1e-8, e.g. near a branch point.
/// Converged once the residual is below tol.surface, or below the round-off
/// floor of evaluating F at (z, w) when that floor is larger.
inline SurfacePoint project_to_surface(const Curve& curve, cplx z, cplx w_guess, const Tolerances& tol = {})
{
    cplx w = w_guess;
    auto step = [&](cplx r) {
        const Partials d = partials(curve, z, w);
        if (std::abs(d.fw) >= 1e-8) {
            w -= r / d.fw;
            return true;
        }
        const double g2 = std::norm(d.fz) + std::norm(d.fw);
        if (g2 == 0.0)
            return false;
        z -= r * std::conj(d.fz) / g2;
        w -= r * std::conj(d.fw) / g2;
        return true;
    };

    double res = 0.0;
    for (int it = 0; it < tol.newton_max_iter; ++it) {
        const cplx r = eval(curve, z, w) - curve.level();
        res = std::abs(r);
        if (!std::isfinite(res))
            break;
        if (res <= std::max(tol.surface, 64.0 * 2.2e-16 * eval_scale(curve, z, w))) {
            // Polish toward machine precision while the residual keeps dropping.
            for (int extra = 0; extra < 2; ++extra) {
                const cplx zk = z, wk = w;
                if (!step(eval(curve, z, w) - curve.level()))
                    break;
                const double next = residual(curve, z, w);
                if (!(next < res)) {
                    z = zk;
                    w = wk;
                    break;
                }
                res = next;
            }
            return {z, w, res, std::nullopt};
        }
        if (!step(r))
            break;
    }
    throw Error(ErrorKind::projection_failure, "Newton projection did not converge", res);
}

struct FlowSample {
    double t;
    SurfacePoint point;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    cplx direction{1.0, 0.0};
    double max_drift = 0.0;

    const SurfacePoint& end() const { return samples.back().point; }
};

/// Flow failure that keeps the part of the trajectory computed so far.
class FlowError : public Error {
public:
    FlowError(ErrorKind kind, const std::string& what, FlowTrace partial, double value = 0.0)
        : Error(kind, what, value), partial_(std::move(partial))
    {}
    const FlowTrace& partial() const noexcept { return partial_; }

private:
    FlowTrace partial_;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*, the difference between the 5th and embedded 4th order weights.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct State {
    std::array<cplx, 2> v;
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }
};

inline State operator+(const State& a, const State& b) { return {{a[0] + b[0], a[1] + b[1]}}; }
inline State operator*(double s, const State& a) { return {{s * a[0], s * a[1]}}; }

} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of the flow of direction * X_F,
/// with a Newton projection back onto S after every accepted step.
/// `step_tol` bounds the embedded local error estimate (max-norm over z, w).
/// Aborts with the partial trace near a critical point of F, or once a
/// projected sample can no longer be held within tol.drift of the level set.
inline FlowTrace integrate_flow(const Curve& curve, const SurfacePoint& start, cplx direction, double t_end,
                                double step_tol = 1e-10, const Tolerances& tol = {})
{
    using detail::DormandPrince;
    using detail::State;

    if (std::abs(std::abs(direction) - 1.0) > 1e-12)
        throw Error(ErrorKind::invalid_input, "flow direction must be a unit complex number");
    if (!(t_end >= 0.0) || !(step_tol > 0.0))
        throw Error(ErrorKind::invalid_input, "flow needs t_end >= 0 and step_tol > 0");

    std::vector<cplx> critical_z, critical_w;
    if (curve.separable()) {
        for (const CriticalPoint& cp : is_regular_value(curve, tol).critical_points) {
            critical_z.push_back(cp.z);
            critical_w.push_back(cp.w);
        }
    }
    auto near_critical = [&](cplx z, cplx w) {
        for (std::size_t k = 0; k < critical_z.size(); ++k)
            if (std::sqrt(std::norm(z - critical_z[k]) + std::norm(w - critical_w[k])) < tol.critical_standoff)
                return true;
        const Partials d = partials(curve, z, w);
        return std::abs(d.fz) == 0.0 && std::abs(d.fw) == 0.0;
    };

    FlowTrace trace;
    trace.direction = direction;
    SurfacePoint first = start;
    first.residual = residual(curve, start.z, start.w);
    trace.samples.push_back({0.0, first});
    trace.max_drift = first.residual;
    if (near_critical(start.z, start.w))
        throw FlowError(ErrorKind::near_singularity, "flow started at a critical point of F", trace);
    if (t_end == 0.0)
        return trace;

    auto rhs = [&](const State& y) -> State {
        const Partials d = partials(curve, y[0], y[1]);
        return {{direction * d.fw, -direction * d.fz}};
    };

    using DP = DormandPrince;
    State y{{start.z, start.w}};
    double t = 0.0;
    State k1 = rhs(y);
    double h = std::min(t_end, 1e-2 / std::max(1.0, std::abs(k1[0]) + std::abs(k1[1])));
    constexpr int max_steps = 2'000'000;
    for (int n = 0; n < max_steps && t < t_end; ++n) {
        const bool last = t + h >= t_end;
        if (last)
            h = t_end - t;
        if (h <= 1e-15 * std::max(1.0, t))
            throw FlowError(ErrorKind::near_singularity, "step size underflow", trace, t);

        const State k2 = rhs(y + (h * DP::a21) * k1);
        const State k3 = rhs(y + h * (DP::a31 * k1 + DP::a32 * k2));
        const State k4 = rhs(y + h * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
        const State k5 = rhs(y + h * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
        const State k6 = rhs(y + h * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5));
        const State y5 = y + h * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
        const State k7 = rhs(y5);
        const State err = h * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);
        const double err_norm = std::max(std::abs(err[0]), std::abs(err[1]));

        if (!std::isfinite(err_norm)) {
            h *= 0.2;
            continue;
        }
        const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(step_tol / err_norm, 0.2), 0.2, 5.0);
        if (err_norm > step_tol) {
            h *= factor;
            continue;
        }

        SurfacePoint next;
        try {
            next = project_to_surface(curve, y5[0], y5[1], tol);
        } catch (const Error& e) {
            throw FlowError(e.kind(), e.detail(), trace, e.value());
        }
        if (next.residual > tol.drift)
            throw FlowError(ErrorKind::near_singularity,
                            "residual exceeds the drift tolerance (trajectory near the pole at infinity)", trace,
                            next.residual);
        t = last ? t_end : t + h;
        y = {{next.z, next.w}};
        trace.samples.push_back({t, next});
        trace.max_drift = std::max(trace.max_drift, next.residual);
        if (near_critical(next.z, next.w))
            throw FlowError(ErrorKind::near_singularity, "trajectory entered the critical-point standoff", trace, t);
        k1 = rhs(y);
        if (!last)
            h *= factor;
    }
    if (t < t_end)
        throw FlowError(ErrorKind::near_singularity, "step budget exhausted", trace, t);
    return trace;
}

inline double distance_r4(const SurfacePoint& a, const SurfacePoint& b)
{
    return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w));
}

/// Distance between Phi_u(s, Phi_v(t, p)) and Phi_v(t, Phi_u(s, p)), where the
/// X_v flow runs in complex-time direction sign * i.
inline double commutator_defect(const Curve& curve, const SurfacePoint& start, double s_time, double t_time,
                                double step_tol = 1e-10, const Tolerances& tol = {})
{
    const int sign = imaginary_field_sign(curve, start);
    const cplx dir_u{1.0, 0.0};
    const cplx dir_v{0.0, sign >= 0 ? 1.0 : -1.0};
    const SurfacePoint vu = integrate_flow(curve, integrate_flow(curve, start, dir_v, t_time, step_tol, tol).end(),
                                           dir_u, s_time, step_tol, tol)
                                .end();
    const SurfacePoint uv = integrate_flow(curve, integrate_flow(curve, start, dir_u, s_time, step_tol, tol).end(),
                                           dir_v, t_time, step_tol, tol)
                                .end();
    return distance_r4(vu, uv);
}

} // namespace riemann
