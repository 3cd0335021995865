#pragma once

// File formats: curve and path JSON, flow-trace CSV, map/tile JSON and SVG.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelian_map.hpp"
#include "continuation.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "tiling.hpp"

namespace riemann::io {

using nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::invalid_input, "expected [re, im], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

/// {"coeffs": [[dz, dw, re, im], ...], "c": [re, im]}
inline json curve_to_json(const Curve& curve)
{
    json coeffs = json::array();
    for (const Term& t : curve.terms())
        coeffs.push_back({t.dz, t.dw, t.coeff.real(), t.coeff.imag()});
    return {{"coeffs", coeffs}, {"c", to_json(curve.level())}};
}

inline Curve curve_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("coeffs") || !j.contains("c") || !j["coeffs"].is_array())
        throw Error(ErrorKind::invalid_input, "curve JSON needs \"coeffs\" and \"c\"");
    std::vector<Term> terms;
    for (const json& row : j["coeffs"]) {
        if (!row.is_array() || row.size() != 4)
            throw Error(ErrorKind::invalid_input, "curve coefficient rows are [dz, dw, re, im]");
        terms.push_back({row[0].get<int>(), row[1].get<int>(), {row[2].get<double>(), row[3].get<double>()}});
    }
    return Curve::from_terms(terms, complex_from_json(j["c"]));
}

/// {"vertices": [[re, im], ...], "w_start": [re, im]}
inline json path_to_json(const ZPath& path)
{
    json vertices = json::array();
    for (cplx v : path.vertices)
        vertices.push_back(to_json(v));
    json out{{"vertices", vertices}, {"w_start", to_json(path.w_start)}};
    if (path.ends_at_branch)
        out["ends_at_branch"] = true;
    return out;
}

inline ZPath path_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("vertices") || !j.contains("w_start"))
        throw Error(ErrorKind::invalid_input, "path JSON needs \"vertices\" and \"w_start\"");
    ZPath path;
    for (const json& v : j["vertices"])
        path.vertices.push_back(complex_from_json(v));
    path.w_start = complex_from_json(j["w_start"]);
    path.ends_at_branch = j.value("ends_at_branch", false);
    return path;
}

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Header `t,re_z,im_z,re_w,im_w,residual`, 17 significant digits.
inline void write_trace_csv(std::ostream& os, const FlowTrace& trace)
{
    os << "t,re_z,im_z,re_w,im_w,residual\n";
    for (const FlowSample& s : trace.samples) {
        os << format_double(s.t) << ',' << format_double(s.point.z.real()) << ','
           << format_double(s.point.z.imag()) << ',' << format_double(s.point.w.real()) << ','
           << format_double(s.point.w.imag()) << ',' << format_double(s.point.residual) << '\n';
    }
}

struct MappedPoint {
    cplx z;
    cplx w;
    cplx zeta;
};

inline json mapped_to_json(const std::vector<MappedPoint>& points)
{
    json out = json::array();
    for (const MappedPoint& p : points)
        out.push_back({{"z", to_json(p.z)}, {"w", to_json(p.w)}, {"zeta", to_json(p.zeta)}});
    return out;
}

inline json layout_to_json(const HexLayout& layout)
{
    json u = json::array(), h = json::array(), k = json::array();
    for (cplx v : layout.u())
        u.push_back(to_json(v));
    for (cplx v : layout.hexagon())
        h.push_back(to_json(v));
    for (cplx v : layout.stellated())
        k.push_back(to_json(v));
    return {{"edge", layout.edge()}, {"u", u}, {"H", h}, {"K", k}};
}

namespace detail {

struct SvgCanvas {
    double scale;
    double half;

    std::string x(cplx z) const { return format_double(half + scale * z.real()); }
    std::string y(cplx z) const { return format_double(half - scale * z.imag()); }

    std::string points(const Polygon& poly) const
    {
        std::string s;
        for (cplx v : poly)
            s += x(v) + "," + y(v) + " ";
        if (!s.empty())
            s.pop_back();
        return s;
    }
};

inline std::string svg_open(double size)
{
    const std::string n = format_double(size);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n + "\" height=\"" + n + "\" viewBox=\"0 0 " + n +
           " " + n + "\">\n";
}

} // namespace detail

/// Hexagon tiling around the origin, K outline and the six lattice vectors.
inline void write_tile_svg(std::ostream& os, const HexLayout& layout, int rings = 2, double size = 600.0)
{
    const double extent = (rings + 1.5) * constants::sqrt3 * layout.edge();
    const detail::SvgCanvas canvas{0.5 * size / extent, 0.5 * size};
    os << detail::svg_open(size);
    os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
          "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n";
    for (int m = -rings; m <= rings; ++m) {
        for (int n = -rings; n <= rings; ++n) {
            if (std::abs(m) + std::abs(n) + std::abs(m + n) > 2 * rings)
                continue;
            Polygon hex = layout.hexagon();
            const cplx shift = layout.lattice_point({m, n});
            for (cplx& v : hex)
                v += shift;
            os << "<polygon points=\"" << canvas.points(hex) << "\" fill=\""
               << ((m == 0 && n == 0) ? "#d6eaf8" : "none") << "\" stroke=\"#34495e\" stroke-width=\"1\"/>\n";
        }
    }
    os << "<polygon points=\"" << canvas.points(layout.stellated())
       << "\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"2\"/>\n";
    for (cplx u : layout.u())
        os << "<line x1=\"" << canvas.x(0.0) << "\" y1=\"" << canvas.y(0.0) << "\" x2=\"" << canvas.x(u)
           << "\" y2=\"" << canvas.y(u) << "\" stroke=\"#c0392b\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
    os << "</svg>\n";
}

/// Image curves zeta(t) as polylines, one per input curve.
inline void write_map_svg(std::ostream& os, const std::vector<std::vector<cplx>>& curves, double size = 600.0)
{
    double extent = 1e-9;
    for (const auto& c : curves)
        for (cplx z : c)
            extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
    const detail::SvgCanvas canvas{0.45 * size / extent, 0.5 * size};
    os << detail::svg_open(size);
    for (const auto& c : curves) {
        os << "<polyline points=\"" << canvas.points(c) << "\" fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace riemann::io
