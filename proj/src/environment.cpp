#include "vine/environment.hpp"

#include "vine/config.hpp"

#include <algorithm>
#include <cmath>

namespace vine {

void Environment::validate() const {
    if (!bounds.valid()) throw std::invalid_argument("environment bounds are degenerate");
    for (const Obstacle& ob : obstacles) {
        if (ob.polyline.size() < 2)
            throw std::invalid_argument("obstacle '" + ob.id + "' needs at least 2 points");
        if (!(ob.thickness >= 0.0))
            throw std::invalid_argument("obstacle '" + ob.id + "' has negative thickness");
        for (const Vec2& p : ob.polyline)
            if (!p.allFinite()) throw std::invalid_argument("obstacle '" + ob.id + "' has a non-finite point");
    }
}

Environment wall_with_gap(double wall_x, double gap_center_y, double gap_height, Bounds bounds,
                          double thickness) {
    if (!(gap_height > 0.0)) throw std::invalid_argument("gap height must be positive");
    Environment env;
    env.bounds = bounds;
    const double gap_lo = gap_center_y - gap_height / 2.0;
    const double gap_hi = gap_center_y + gap_height / 2.0;
    if (gap_lo > bounds.min.y())
        env.obstacles.push_back({"wall_lower", {{wall_x, bounds.min.y()}, {wall_x, gap_lo}}, thickness});
    if (gap_hi < bounds.max.y())
        env.obstacles.push_back({"wall_upper", {{wall_x, gap_hi}, {wall_x, bounds.max.y()}}, thickness});
    return env;
}

Environment horizontal_bar(double bar_y, double x_min, double x_max, Bounds bounds, double thickness) {
    if (!(x_max > x_min)) throw std::invalid_argument("bar must have positive length");
    Environment env;
    env.bounds = bounds;
    env.obstacles.push_back({"bar", {{x_min, bar_y}, {x_max, bar_y}}, thickness});
    return env;
}

Environment make_preset(const WallGapPreset& p) {
    return wall_with_gap(p.wall_x, p.gap_center_y, p.gap_height, p.bounds, p.thickness);
}

Environment make_preset(const HorizontalBarPreset& p) {
    return horizontal_bar(p.bar_y, p.x_min, p.x_max, p.bounds, p.thickness);
}

bool is_preset_name(std::string_view name) {
    return name == "wall_gap" || name == "horizontal_bar" || name == "free";
}

Environment preset(std::string_view name) {
    if (name == "wall_gap") return make_preset(WallGapPreset{});
    if (name == "horizontal_bar") return make_preset(HorizontalBarPreset{});
    if (name == "free") return Environment{};
    throw std::invalid_argument("unknown environment preset '" + std::string(name) + "'");
}

std::string_view to_string(ContactStatus status) {
    switch (status) {
        case ContactStatus::clear: return "clear";
        case ContactStatus::touching: return "touching";
        case ContactStatus::penetrating: return "penetrating";
    }
    return "unknown";
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, Vec2* closest) {
    const Vec2 ab = b - a;
    const double len_sq = ab.squaredNorm();
    double t = len_sq > 0.0 ? (p - a).dot(ab) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 foot = a + t * ab;
    if (closest) *closest = foot;
    return (p - foot).norm();
}

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, Vec2* where) {
    const Vec2 r = b - a;
    const Vec2 s = d - c;
    const double denom = cross(r, s);
    if (denom == 0.0) return false;  // parallel: endpoint distances cover it
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
    if (where) *where = a + t * r;
    return true;
}

}  // namespace

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, Vec2* on_ab,
                                Vec2* on_cd) {
    Vec2 hit;
    if (segments_intersect(a, b, c, d, &hit)) {
        if (on_ab) *on_ab = hit;
        if (on_cd) *on_cd = hit;
        return 0.0;
    }
    // otherwise the minimum is attained at an endpoint of one segment
    double best = std::numeric_limits<double>::infinity();
    Vec2 foot;
    const auto consider = [&](double dist, const Vec2& p_ab, const Vec2& p_cd) {
        if (dist < best) {
            best = dist;
            if (on_ab) *on_ab = p_ab;
            if (on_cd) *on_cd = p_cd;
        }
    };
    consider(point_segment_distance(a, c, d, &foot), a, foot);
    consider(point_segment_distance(b, c, d, &foot), b, foot);
    consider(point_segment_distance(c, a, b, &foot), foot, c);
    consider(point_segment_distance(d, a, b, &foot), foot, d);
    return best;
}

ContactReport contact(std::span<const Vec2> points, double body_radius, const Environment& env,
                      double touch_tol) {
    if (!(touch_tol >= 0.0)) throw std::invalid_argument("touch tolerance must be >= 0");
    ContactReport report;
    if (points.empty()) return report;

    for (const Obstacle& ob : env.obstacles) {
        const double inflate = body_radius + ob.thickness / 2.0;
        for (std::size_t j = 1; j < ob.polyline.size(); ++j) {
            const Vec2& c = ob.polyline[j - 1];
            const Vec2& d = ob.polyline[j];
            const auto record = [&](double dist, const Vec2& on_body, const Vec2& on_obstacle) {
                const double clearance = dist - inflate;
                if (clearance < report.min_clearance) {
                    report.min_clearance = clearance;
                    report.body_point = on_body;
                    report.obstacle_point = on_obstacle;
                    report.obstacle_id = ob.id;
                }
            };
            if (points.size() == 1) {
                Vec2 foot;
                const double dist = point_segment_distance(points[0], c, d, &foot);
                record(dist, points[0], foot);
                continue;
            }
            for (std::size_t i = 1; i < points.size(); ++i) {
                Vec2 pa, pb;
                const double dist = segment_segment_distance(points[i - 1], points[i], c, d, &pa, &pb);
                record(dist, pa, pb);
            }
        }
    }

    if (report.min_clearance < -touch_tol)
        report.status = ContactStatus::penetrating;
    else if (report.min_clearance <= touch_tol)
        report.status = ContactStatus::touching;
    return report;
}

ContactReport contact(const BodyPolyline& body, const Environment& env, double touch_tol) {
    return contact(body.points, body.body_radius, env, touch_tol);
}

std::uint64_t environment_hash(const Environment& env) {
    const std::string text = to_json(env).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace vine
