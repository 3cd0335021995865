#pragma once

// Bivariate polynomial curves F(z,w) = c, their derivatives and the
// holomorphic / real Hamiltonian vector fields they generate on C^2 = R^4.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "tolerances.hpp"

namespace riemann {

struct Term {
    int dz;
    int dw;
    cplx coeff;
};

/// F(z,w) = p(w) + q(z), both in ascending coefficient order.
struct SeparableForm {
    std::vector<cplx> p;
    std::vector<cplx> q;
};

class Curve {
public:
    /// Dense coefficient table indexed as table[dz][dw].
    Curve(std::vector<std::vector<cplx>> table, cplx level) : table_(std::move(table)), level_(level)
    {
        normalize();
        detect_separable();
    }

    static Curve from_terms(const std::vector<Term>& terms, cplx level)
    {
        int max_z = 0, max_w = 0;
        for (const Term& t : terms) {
            if (t.dz < 0 || t.dw < 0)
                throw Error(ErrorKind::invalid_input, "negative exponent in curve term");
            max_z = std::max(max_z, t.dz);
            max_w = std::max(max_w, t.dw);
        }
        std::vector<std::vector<cplx>> table(static_cast<std::size_t>(max_z) + 1,
                                             std::vector<cplx>(static_cast<std::size_t>(max_w) + 1));
        for (const Term& t : terms)
            table[static_cast<std::size_t>(t.dz)][static_cast<std::size_t>(t.dw)] += t.coeff;
        return Curve(std::move(table), level);
    }

    /// Named presets. "w2z6" is w^2 + z^6 = 1.
    static Curve preset(std::string_view name)
    {
        if (name == "w2z6")
            return from_terms({{0, 2, 1.0}, {6, 0, 1.0}}, 1.0);
        if (name == "w2z2")
            return from_terms({{0, 2, 1.0}, {2, 0, 1.0}}, 1.0);
        throw Error(ErrorKind::invalid_input, "unknown curve preset '" + std::string(name) + "'");
    }

    const std::vector<std::vector<cplx>>& table() const noexcept { return table_; }
    cplx level() const noexcept { return level_; }
    const std::optional<SeparableForm>& separable() const noexcept { return separable_; }

    Curve with_level(cplx level) const { return Curve(table_, level); }

    std::vector<Term> terms() const
    {
        std::vector<Term> out;
        for (std::size_t i = 0; i < table_.size(); ++i)
            for (std::size_t j = 0; j < table_[i].size(); ++j)
                if (table_[i][j] != cplx{})
                    out.push_back({static_cast<int>(i), static_cast<int>(j), table_[i][j]});
        return out;
    }

    int total_degree() const
    {
        int deg = -1;
        for (const Term& t : terms())
            deg = std::max(deg, t.dz + t.dw);
        return deg;
    }

private:
    void normalize()
    {
        std::size_t width = 0;
        for (const auto& row : table_)
            width = std::max(width, row.size());
        for (auto& row : table_)
            row.resize(width);
        if (table_.empty() || width == 0)
            throw Error(ErrorKind::invalid_input, "empty coefficient table");
        if (total_degree() < 1)
            throw Error(ErrorKind::invalid_input, "curve must have total degree >= 1");
    }

    void detect_separable()
    {
        SeparableForm form;
        for (std::size_t i = 0; i < table_.size(); ++i)
            for (std::size_t j = 0; j < table_[i].size(); ++j)
                if (i > 0 && j > 0 && table_[i][j] != cplx{})
                    return;
        form.p.assign(table_[0].begin(), table_[0].end());
        form.q.resize(table_.size());
        for (std::size_t i = 1; i < table_.size(); ++i)
            form.q[i] = table_[i][0];
        // The constant term lives in p; q carries no constant.
        form.p = trimmed(form.p);
        form.q = trimmed(form.q);
        separable_ = std::move(form);
    }

    std::vector<std::vector<cplx>> table_;
    cplx level_;
    std::optional<SeparableForm> separable_;
};

struct SurfacePoint {
    cplx z;
    cplx w;
    double residual = 0.0;
    std::optional<int> sheet;
};

/// (Re z, Im z, Re w, Im w) components of a real tangent vector on R^4.
using RealTangent = std::array<double, 4>;

inline cplx eval(const Curve& curve, cplx z, cplx w)
{
    const auto& table = curve.table();
    cplx acc{};
    for (auto row = table.rbegin(); row != table.rend(); ++row)
        acc = acc * z + horner(*row, w);
    return acc;
}

inline double residual(const Curve& curve, cplx z, cplx w) { return std::abs(eval(curve, z, w) - curve.level()); }

/// Sum of |a_ij| |z|^i |w|^j + |c|: the magnitude against which round-off in
/// evaluating F(z,w) - c is measured.
inline double eval_scale(const Curve& curve, cplx z, cplx w)
{
    const double az = std::abs(z), aw = std::abs(w);
    double acc = 0.0;
    const auto& table = curve.table();
    for (auto row = table.rbegin(); row != table.rend(); ++row) {
        double r = 0.0;
        for (auto c = row->rbegin(); c != row->rend(); ++c)
            r = r * aw + std::abs(*c);
        acc = acc * az + r;
    }
    return acc + std::abs(curve.level());
}

inline SurfacePoint make_point(const Curve& curve, cplx z, cplx w, std::optional<int> sheet = std::nullopt)
{
    return {z, w, residual(curve, z, w), sheet};
}

struct Partials {
    cplx fz;
    cplx fw;
};

inline Partials partials(const Curve& curve, cplx z, cplx w)
{
    const auto& table = curve.table();
    cplx fz{}, fw{};
    for (std::size_t i = table.size(); i-- > 0;) {
        const auto& row = table[i];
        fw = fw * z + horner(derivative(row), w);
        if (i > 0)
            fz = fz * z + static_cast<double>(i) * horner(row, w);
    }
    return {fz, fw};
}

/// X_F with X_F _| (dz ^ dw) = dF, i.e. (dz/dt, dw/dt) = (F_w, -F_z).
struct ComplexField {
    cplx dz;
    cplx dw;
};

inline ComplexField hamiltonian_field(const Curve& curve, cplx z, cplx w)
{
    const Partials d = partials(curve, z, w);
    return {d.fw, -d.fz};
}

struct CriticalPoint {
    cplx z;
    cplx w;
    cplx value;
};

struct RegularityReport {
    bool regular = true;
    std::vector<CriticalPoint> critical_points;
};

namespace detail {

inline const SeparableForm& require_separable(const Curve& curve)
{
    if (!curve.separable())
        throw Error(ErrorKind::unsupported_form, "critical/branch enumeration needs F(z,w) = p(w) + q(z)");
    return *curve.separable();
}

// Roots of a derivative; an identically-zero derivative means every point is
// stationary in that variable, and 0 serves as the representative.
inline std::vector<cplx> stationary_points(const std::vector<cplx>& poly, double merge_tol)
{
    const std::vector<cplx> d = trimmed(derivative(poly));
    if (d.empty())
        return {cplx{}};
    return polynomial_roots(d, merge_tol);
}

} // namespace detail

inline RegularityReport is_regular_value(const Curve& curve, const Tolerances& tol = {})
{
    const SeparableForm& form = detail::require_separable(curve);
    RegularityReport report;
    const auto w_crit = detail::stationary_points(form.p, tol.root_merge);
    const auto z_crit = detail::stationary_points(form.q, tol.root_merge);
    for (cplx zs : z_crit) {
        for (cplx ws : w_crit) {
            const cplx value = horner(form.p, ws) + horner(form.q, zs);
            report.critical_points.push_back({zs, ws, value});
            if (std::abs(value - curve.level()) <= tol.root)
                report.regular = false;
        }
    }
    return report;
}

struct BranchData {
    std::vector<SurfacePoint> points;
    std::vector<cplx> values;  // z-projections, duplicates removed
    bool regular = true;
};

/// Points of S where F_w = 0 (the projection (z,w) -> z is not a local
/// diffeomorphism there) and their z-projections.
inline BranchData branch_points(const Curve& curve, const Tolerances& tol = {})
{
    const SeparableForm& form = detail::require_separable(curve);
    if (trimmed(derivative(form.p)).empty())
        throw Error(ErrorKind::unsupported_form, "F does not depend on w");
    BranchData data;
    data.regular = is_regular_value(curve, tol).regular;
    for (cplx ws : polynomial_roots(trimmed(derivative(form.p)), tol.root_merge)) {
        std::vector<cplx> poly = form.q;
        if (poly.empty())
            poly.push_back(cplx{});
        poly[0] -= curve.level() - horner(form.p, ws);
        for (cplx zs : polynomial_roots(poly, tol.root_merge)) {
            data.points.push_back(make_point(curve, zs, ws));
            bool seen = false;
            for (cplx v : data.values)
                seen = seen || std::abs(v - zs) <= tol.root_merge;
            if (!seen)
                data.values.push_back(zs);
        }
    }
    return data;
}

enum class RealPart { u, v };

/// Omega(a, b) for Omega = Re(dz ^ dw) = dx1 ^ dx2 - dy1 ^ dy2.
inline double omega(const RealTangent& a, const RealTangent& b)
{
    return a[0] * b[2] - a[2] * b[0] - a[1] * b[3] + a[3] * b[1];
}

/// Solves Omega(X, .) = dh for X given the gradient of h over R^4.
inline RealTangent omega_sharp(const RealTangent& grad) { return {grad[2], -grad[3], -grad[0], grad[1]}; }

/// Real gradient of u = Re F or v = Im F, from (F_z, F_w) via Cauchy-Riemann.
inline RealTangent real_gradient(const Curve& curve, cplx z, cplx w, RealPart which)
{
    const Partials d = partials(curve, z, w);
    if (which == RealPart::u)
        return {d.fz.real(), -d.fz.imag(), d.fw.real(), -d.fw.imag()};
    return {d.fz.imag(), d.fz.real(), d.fw.imag(), d.fw.real()};
}

inline RealTangent real_hamiltonian(const Curve& curve, const SurfacePoint& p, RealPart which)
{
    return omega_sharp(real_gradient(curve, p.z, p.w, which));
}

inline RealTangent embed(const ComplexField& f) { return {f.dz.real(), f.dz.imag(), f.dw.real(), f.dw.imag()}; }

inline double poisson_bracket(const Curve& curve, const SurfacePoint& p)
{
    return omega(real_hamiltonian(curve, p, RealPart::u), real_hamiltonian(curve, p, RealPart::v));
}

/// The sign s with X_v = s * embed(i X_F) at `p` (0 at a critical point).
inline int imaginary_field_sign(const Curve& curve, const SurfacePoint& p)
{
    const RealTangent xv = real_hamiltonian(curve, p, RealPart::v);
    const ComplexField f = hamiltonian_field(curve, p.z, p.w);
    const RealTangent ixf = embed({cplx{0, 1} * f.dz, cplx{0, 1} * f.dw});
    double dot = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
        dot += xv[k] * ixf[k];
    return dot > 0.0 ? 1 : (dot < 0.0 ? -1 : 0);
}

/// Smallest singular value of the 2x4 matrix with rows X_u, X_v.
inline double independence_margin(const RealTangent& a, const RealTangent& b)
{
    double aa = 0, bb = 0, ab = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        aa += a[k] * a[k];
        bb += b[k] * b[k];
        ab += a[k] * b[k];
    }
    const double tr = aa + bb;
    const double det = aa * bb - ab * ab;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    return std::sqrt(std::max(0.0, tr / 2 - disc));
}

} // namespace riemann
