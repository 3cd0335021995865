// Command-line front end: audit, constants, flow, map, tile, continue.
// Exit codes: 0 success, 1 an asserted audit claim failed, 2 usage or input error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riemann/audit.hpp"

namespace {

using namespace riemann;
using nlohmann::json;

constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_real_exact(const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError("not a number: '" + text + "'");
    return v;
}

/// "1", "-0.5i", "0.3-0.2i", "i", "(re,im)".
cplx parse_complex(std::string text)
{
    std::erase_if(text, [](unsigned char c) { return std::isspace(c); });
    if (text.size() > 2 && text.front() == '(' && text.back() == ')') {
        const auto comma = text.find(',');
        if (comma == std::string::npos)
            throw UsageError("expected (re,im) but got '" + text + "'");
        return {parse_real_exact(text.substr(1, comma - 1)),
                parse_real_exact(text.substr(comma + 1, text.size() - comma - 2))};
    }
    if (text.empty() || text.back() != 'i')
        return {parse_real_exact(text), 0.0};
    text.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = text.size(); k-- > 1;)
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : text.substr(0, split);
    const std::string im = split == std::string::npos ? text : text.substr(split);
    const double im_value = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real_exact(im);
    return {re.empty() ? 0.0 : parse_real_exact(re), im_value};
}

/// "z,w" with each part a complex number; parentheses may contain commas.
std::pair<cplx, cplx> parse_point(const std::string& text)
{
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        depth += text[i] == '(';
        depth -= text[i] == ')';
        if (text[i] == ',' && depth == 0)
            return {parse_complex(text.substr(0, i)), parse_complex(text.substr(i + 1))};
    }
    throw UsageError("expected z,w but got '" + text + "'");
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path + " is not valid JSON: " + e.what());
    }
}

Curve load_curve(const std::string& name)
{
    if (name == "w2z6" || name == "w2z2")
        return Curve::preset(name);
    if (!std::filesystem::exists(name))
        throw UsageError("unknown curve '" + name + "' (presets: w2z6, w2z2; or a JSON file)");
    return io::curve_from_json(read_json_file(name));
}

/// Writes to --out when given, otherwise to stdout.
void emit(const std::string& out_path, const std::string& text)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + out_path);
    out << text;
}

SurfacePoint start_point(const Curve& curve, const std::string& text, const Tolerances& tol)
{
    const auto [z, w] = parse_point(text);
    SurfacePoint p = make_point(curve, z, w);
    if (p.residual > tol.surface)
        p = project_to_surface(curve, z, w, tol);
    return p;
}

struct Options {
    std::string curve = "w2z6";
    std::uint64_t seed = 7;
    double tol = 1e-10;
    std::string out;
    std::string format;
    std::string config;
    bool timing = false;

    // flow / map
    std::string start = "0,1";
    std::string direction = "1";
    double t_end = 1.0;
    int grid = 0;
    double radius = 0.9;

    // tile
    std::string edge = "L";
    int rings = 2;

    // continue
    std::string path;
};

RunConfig build_config(const CLI::App& app, const Options& opt)
{
    RunConfig cfg;
    if (!opt.config.empty())
        apply_config_json(cfg, read_json_file(opt.config));
    apply_environment(cfg);
    if (app.count("--curve"))
        cfg.curve = opt.curve;
    if (app.count("--seed"))
        cfg.seed = opt.seed;
    if (app.count("--tol"))
        cfg.step_tol = opt.tol;
    if (opt.timing)
        cfg.timing = true;
    return cfg;
}

std::string require_format(const std::string& given, const std::string& fallback,
                           std::initializer_list<const char*> allowed, const char* command)
{
    const std::string f = given.empty() ? fallback : given;
    for (const char* a : allowed)
        if (f == a)
            return f;
    throw UsageError(std::string(command) + " does not support --format " + f);
}

int run_audit_command(const RunConfig& cfg, const Options& opt)
{
    const std::string format = require_format(opt.format, "json", {"json", "md"}, "audit");
    const audit::AuditReport report = audit::run_audit(cfg, load_curve(cfg.curve));
    const std::string json_text = report.document.dump(2) + "\n";
    const std::string md_text = audit::to_markdown(report.document);
    if (!opt.out.empty() && format == "json") {
        emit(opt.out, json_text);
        emit(std::filesystem::path(opt.out).replace_extension(".md").string(), md_text);
    } else {
        emit(opt.out, format == "json" ? json_text : md_text);
    }
    const json& s = report.document["summary"];
    std::cerr << "audit: " << s["PASS"] << " PASS, " << s["FAIL"] << " FAIL, " << s["VALUE"] << " VALUE, " << s["ERROR"]
              << " ERROR\n";
    return report.asserted_failures() == 0 ? 0 : 1;
}

int run_constants(const RunConfig& cfg, const Options& opt)
{
    const std::string format = require_format(opt.format, "json", {"json", "md"}, "constants");
    const MapConstants k = map_constants(load_curve(cfg.curve), cfg.tol);
    const double beta = audit::detail::beta_reference();
    if (format == "json") {
        const json j{{"alpha", io::to_json(k.alpha)},
                     {"L", k.edge_length},
                     {"C", k.c_full},
                     {"beta_reference", beta},
                     {"C_minus_beta", k.c_full - beta}};
        emit(opt.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "| constant | value |\n|---|---|\n"
           << "| alpha | " << io::format_double(k.alpha.real()) << (k.alpha.imag() < 0 ? "" : "+")
           << io::format_double(k.alpha.imag()) << "i |\n"
           << "| L | " << io::format_double(k.edge_length) << " |\n"
           << "| C = 2L | " << io::format_double(k.c_full) << " |\n"
           << "| (1/6) B(1/6,1/2) | " << io::format_double(beta) << " |\n";
        emit(opt.out, os.str());
    }
    return 0;
}

FlowTrace flow_trace(const Curve& curve, const RunConfig& cfg, const Options& opt)
{
    const cplx direction = parse_complex(opt.direction);
    if (std::abs(std::abs(direction) - 1.0) > 1e-12)
        throw UsageError("--direction must have modulus 1");
    if (!(opt.t_end >= 0.0))
        throw UsageError("--t must be non-negative");
    return integrate_flow(curve, start_point(curve, opt.start, cfg.tol), direction, opt.t_end, cfg.step_tol, cfg.tol);
}

int run_flow(const RunConfig& cfg, const Options& opt)
{
    const std::string format = require_format(opt.format, "csv", {"csv", "json"}, "flow");
    const Curve curve = load_curve(cfg.curve);
    const FlowTrace trace = flow_trace(curve, cfg, opt);
    if (format == "csv") {
        std::ostringstream os;
        io::write_trace_csv(os, trace);
        emit(opt.out, os.str());
    } else {
        json samples = json::array();
        for (const FlowSample& s : trace.samples)
            samples.push_back({{"t", s.t}, {"z", io::to_json(s.point.z)}, {"w", io::to_json(s.point.w)},
                               {"residual", s.point.residual}});
        emit(opt.out, json{{"direction", io::to_json(trace.direction)}, {"max_drift", trace.max_drift},
                           {"samples", samples}}
                          .dump(2) +
                          "\n");
    }
    return 0;
}

/// Images of circles and rays of a polar grid on sheet 0, each split where it
/// comes within the branch standoff.
std::vector<std::vector<io::MappedPoint>> map_grid(const SheetTracker& tracker, int n, double radius)
{
    const cplx w0 = tracker.labeled_fiber(0.0).front();
    const cplx alpha = map_constants(tracker).alpha;
    std::vector<std::vector<cplx>> lines;
    const int per_line = 8 * n;
    for (int i = 1; i <= n; ++i) {
        std::vector<cplx> circle;
        for (int j = 0; j <= per_line; ++j)
            circle.push_back(std::polar(radius * i / n, 2.0 * audit::detail::pi * j / per_line));
        lines.push_back(circle);
    }
    for (int j = 0; j < 2 * n; ++j) {
        std::vector<cplx> ray;
        for (int i = 0; i <= per_line; ++i)
            ray.push_back(std::polar(radius * i / per_line, 2.0 * audit::detail::pi * (j + 0.5) / (2 * n)));
        lines.push_back(ray);
    }
    std::vector<std::vector<io::MappedPoint>> out;
    for (const auto& line : lines) {
        std::vector<io::MappedPoint> piece;
        for (cplx z : line) {
            try {
                const ZPath path{{0.0, z}, w0};
                const FormIntegral f = integrate_form_detailed(tracker, path);
                piece.push_back({z, f.w_end.value_or(w0), alpha * f.value});
            } catch (const Error&) {
                if (piece.size() > 1)
                    out.push_back(piece);
                piece.clear();
            }
        }
        if (piece.size() > 1)
            out.push_back(piece);
    }
    return out;
}

/// zeta along a flow trace: the base path to the start, then the chords
/// between consecutive samples.
std::vector<io::MappedPoint> map_trace(const SheetTracker& tracker, const FlowTrace& trace)
{
    const SurfacePoint& start = trace.samples.front().point;
    const ZPath base = sheet_path(tracker, start);
    ZPath path = base;
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        path.vertices.push_back(trace.samples[i].point.z);
    const FormIntegral f = integrate_form_detailed(tracker, path);
    const cplx alpha = map_constants(tracker).alpha;
    std::vector<io::MappedPoint> out;
    const std::size_t offset = base.vertices.size() - 1;
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        out.push_back({trace.samples[i].point.z, trace.samples[i].point.w, alpha * f.cumulative[offset + i]});
    return out;
}

int run_map(const RunConfig& cfg, const Options& opt, bool from_trace)
{
    const std::string format = require_format(opt.format, "json", {"json", "svg"}, "map");
    const Curve curve = load_curve(cfg.curve);
    const SheetTracker tracker(curve, cfg.tol);
    std::vector<std::vector<io::MappedPoint>> curves;
    if (from_trace)
        curves.push_back(map_trace(tracker, flow_trace(curve, cfg, opt)));
    else
        curves = map_grid(tracker, opt.grid > 0 ? opt.grid : 6, opt.radius);
    if (format == "json") {
        json j = json::array();
        for (const auto& c : curves)
            j.push_back(io::mapped_to_json(c));
        emit(opt.out, json{{"curves", j}}.dump(2) + "\n");
    } else {
        std::vector<std::vector<cplx>> images;
        for (const auto& c : curves) {
            images.emplace_back();
            for (const auto& p : c)
                images.back().push_back(p.zeta);
        }
        std::ostringstream os;
        io::write_map_svg(os, images);
        emit(opt.out, os.str());
    }
    return 0;
}

int run_tile(const RunConfig& cfg, const Options& opt)
{
    const std::string format = require_format(opt.format, "json", {"json", "svg"}, "tile");
    double edge = 0.0;
    if (opt.edge == "L" || opt.edge == "C") {
        const MapConstants k = map_constants(load_curve(cfg.curve), cfg.tol);
        edge = opt.edge == "L" ? k.edge_length : k.c_full;
    } else {
        try {
            std::size_t used = 0;
            edge = std::stod(opt.edge, &used);
            if (used != opt.edge.size())
                throw std::invalid_argument(opt.edge);
        } catch (const std::exception&) {
            throw UsageError("--edge takes L, C or a positive number");
        }
    }
    if (!(edge > 0.0))
        throw UsageError("--edge must be positive");
    if (opt.rings < 0)
        throw UsageError("--rings must be non-negative");
    const HexLayout layout(edge);
    if (format == "json") {
        emit(opt.out, io::layout_to_json(layout).dump(2) + "\n");
    } else {
        std::ostringstream os;
        io::write_tile_svg(os, layout, opt.rings);
        emit(opt.out, os.str());
    }
    return 0;
}

int run_continue(const RunConfig& cfg, const Options& opt)
{
    require_format(opt.format, "json", {"json"}, "continue");
    const Curve curve = load_curve(cfg.curve);
    const SheetTracker tracker(curve, cfg.tol);
    const ZPath path = io::path_from_json(read_json_file(opt.path));
    const ContinuationResult r = tracker.continue_w(path);
    json vertex_w = json::array();
    for (cplx w : r.vertex_w)
        vertex_w.push_back(io::to_json(w));
    json j{{"w_end", io::to_json(r.w_end)}, {"vertex_w", vertex_w}};
    if (path.vertices.size() > 1 && path.vertices.front() == path.vertices.back())
        j["monodromy"] = tracker.monodromy(path.vertices);
    emit(opt.out, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Holomorphic Hamiltonian flows, the Abelian map and the hexagonal tiling"};
    app.name("riemann");
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;

    app.add_option("--curve", opt.curve, "Preset (w2z6, w2z2) or curve JSON file");
    app.add_option("--seed", opt.seed, "Random seed");
    app.add_option("--tol", opt.tol, "Integrator step tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", opt.out, "Output file (default stdout)");
    app.add_option("--format", opt.format, "json, csv, svg or md")
        ->check(CLI::IsMember({"json", "csv", "svg", "md"}));
    app.add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);

    auto* audit_cmd = app.add_subcommand("audit", "Evaluate every registered claim");
    audit_cmd->add_flag("--timing", opt.timing, "Record per-claim wall time in the report");

    app.add_subcommand("constants", "alpha, L, C and the Beta reference");

    auto* flow_cmd = app.add_subcommand("flow", "Integrate the Hamiltonian flow, CSV trace");
    auto* map_cmd = app.add_subcommand("map", "Image under delta of a polar grid or a flow trace");
    for (auto* cmd : {flow_cmd, map_cmd}) {
        cmd->add_option("--start", opt.start, "Start point z,w (complex, e.g. 0,1 or 0.3+0.1i,1)");
        cmd->add_option("--direction", opt.direction, "Unit complex time direction");
        cmd->add_option("--t", opt.t_end, "Flow time");
    }
    map_cmd->add_option("--grid", opt.grid, "Polar grid resolution (default: 6 when no --start)");
    map_cmd->add_option("--radius", opt.radius, "Grid radius")->check(CLI::PositiveNumber);

    auto* tile_cmd = app.add_subcommand("tile", "Hexagon layout, lattice vectors and stellated hexagon");
    tile_cmd->add_option("--edge", opt.edge, "Edge length: L, C or a number");
    tile_cmd->add_option("--rings", opt.rings, "Rings of hexagons drawn around H");

    auto* continue_cmd = app.add_subcommand("continue", "Continue w along a path; monodromy for loops");
    continue_cmd->add_option("--path", opt.path, "Path JSON file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        const RunConfig cfg = build_config(app, opt);
        if (audit_cmd->parsed())
            return run_audit_command(cfg, opt);
        if (app.got_subcommand("constants"))
            return run_constants(cfg, opt);
        if (flow_cmd->parsed())
            return run_flow(cfg, opt);
        if (map_cmd->parsed())
            return run_map(cfg, opt, map_cmd->count("--start") > 0);
        if (tile_cmd->parsed())
            return run_tile(cfg, opt);
        return run_continue(cfg, opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
