#include "vine/workspace_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <numbers>
#include <string>

namespace vine {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

}  // namespace

void write_csv(const WorkspaceGrid& grid, std::ostream& out) {
    out << "x,y,phi_min,phi_max,phi_count\n";
    for (const auto& [key, set] : grid.cells()) {
        const Vec2 c = grid.center(key);
        out << fixed(c.x(), 6) << ',' << fixed(c.y(), 6) << ',' << fixed(set.phi_min, 9) << ','
            << fixed(set.phi_max, 9) << ',' << set.count() << '\n';
    }
}

json to_json(const WorkspaceGrid& grid) {
    const WorkspaceMetadata& m = grid.metadata;
    json cells = json::array();
    for (const auto& [key, set] : grid.cells()) {
        const Vec2 c = grid.center(key);
        cells.push_back({{"ix", key.ix},
                         {"iy", key.iy},
                         {"x", c.x()},
                         {"y", c.y()},
                         {"phi_min", set.phi_min},
                         {"phi_max", set.phi_max},
                         {"phi_bins_deg", set.bins},
                         {"phi_span", set.span()}});
    }
    return {{"metadata",
             {{"mode", m.mode},
              {"spec", to_json(m.spec)},
              {"kappa_bound", m.kappa_bound},
              {"body_radius", m.body_radius},
              {"constrained", m.constrained},
              {"environment_hash", hex64(m.environment_hash)},
              {"configurations", m.configurations},
              {"xy_resolution", grid.resolution()},
              {"cell_count", grid.size()}}},
            {"cells", cells}};
}

json to_json(const CoverageMetrics& m) {
    return {{"count_a", m.count_a},
            {"count_b", m.count_b},
            {"a_in_b", m.a_in_b},
            {"containment", m.containment},
            {"count_ratio", m.count_ratio},
            {"singleton_fraction_a", m.singleton_fraction_a},
            {"singleton_fraction_b", m.singleton_fraction_b},
            {"mean_span_a_deg", m.mean_span_a * 180.0 / std::numbers::pi},
            {"mean_span_b_deg", m.mean_span_b * 180.0 / std::numbers::pi},
            {"max_span_a_deg", m.max_span_a * 180.0 / std::numbers::pi},
            {"max_span_b_deg", m.max_span_b * 180.0 / std::numbers::pi}};
}

void write_svg(const WorkspaceGrid& grid, const Environment* env, std::ostream& out,
               const WorkspaceGrid* overlay) {
    const double res = grid.resolution();
    Vec2 lo(-0.05, -0.05), hi(0.05, 0.05);
    const auto extend = [&](const Vec2& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& [key, set] : grid.cells()) {
        extend(grid.center(key) - Vec2::Constant(res));
        extend(grid.center(key) + Vec2::Constant(res));
    }
    if (env)
        for (const Obstacle& ob : env->obstacles)
            for (const Vec2& p : ob.polyline) extend(p);

    const double scale = 1000.0;  // px per metre
    const double width = (hi.x() - lo.x()) * scale;
    const double height = (hi.y() - lo.y()) * scale;
    const auto sx = [&](double x) { return fixed((x - lo.x()) * scale, 2); };
    const auto sy = [&](double y) { return fixed((hi.y() - y) * scale, 2); };
    const std::string cell = fixed(res * scale, 2);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
        << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 2) << ' ' << fixed(height, 2) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto draw = [&](const WorkspaceGrid& g, bool outline) {
        for (const auto& [key, set] : g.cells()) {
            const Vec2 c = g.center(key);
            // hue runs blue (single angle) to red (half turn or more)
            const double t = std::min(1.0, set.span() / std::numbers::pi);
            const int hue = static_cast<int>(240.0 * (1.0 - t));
            out << "<rect x=\"" << sx(c.x() - res / 2) << "\" y=\"" << sy(c.y() + res / 2) << "\" width=\""
                << cell << "\" height=\"" << cell << "\" ";
            if (outline)
                out << "fill=\"none\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
            else
                out << "fill=\"hsl(" << hue << ",80%,55%)\" fill-opacity=\"0.8\"/>\n";
        }
    };
    draw(grid, false);
    if (overlay) draw(*overlay, true);

    if (env) {
        for (const Obstacle& ob : env->obstacles) {
            out << "<polyline fill=\"none\" stroke=\"#333\" stroke-width=\""
                << fixed(std::max(ob.thickness * scale, 1.0), 2) << "\" points=\"";
            for (const Vec2& p : ob.polyline) out << sx(p.x()) << ',' << sy(p.y()) << ' ';
            out << "\"/>\n";
        }
    }
    out << "<circle cx=\"" << sx(0.0) << "\" cy=\"" << sy(0.0) << "\" r=\"4\" fill=\"black\"/>\n";
    out << "</svg>\n";
}

}  // namespace vine
