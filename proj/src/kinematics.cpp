#include "vine/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace vine {

namespace {

constexpr double kSeriesThreshold = 1e-6;

// (1 - cos t) / t and sin t / t, stable near zero.
double versine_ratio(double t) {
    if (std::abs(t) < kSeriesThreshold) return t / 2.0 - t * t * t / 24.0;
    const double h = std::sin(t / 2.0);
    return 2.0 * h * h / t;
}

double sine_ratio(double t) {
    if (std::abs(t) < kSeriesThreshold) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

Vec2 arc_translation(double theta, double mean_length) {
    return {mean_length * versine_ratio(theta), mean_length * sine_ratio(theta)};
}

}  // namespace

double normalize_angle(double angle) {
    double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
    return wrapped;
}

double angle_difference(double a, double b) { return normalize_angle(a - b); }

double RobotParams::kappa_max() const {
    if (kappa_max_override) return *kappa_max_override;
    return (1.0 - min_side_fraction) / ((1.0 + min_side_fraction) * body_radius);
}

void RobotParams::validate() const {
    if (!(body_radius > 0.0)) throw std::invalid_argument("body_radius must be positive");
    if (!(lock_body_radius > 0.0)) throw std::invalid_argument("lock_body_radius must be positive");
    if (!(segment_neutral_length > 0.0))
        throw std::invalid_argument("segment_neutral_length must be positive");
    if (!(min_side_fraction > 0.0 && min_side_fraction <= 1.0))
        throw std::invalid_argument("min_side_fraction must lie in (0, 1]");
    const double k = kappa_max();
    if (!std::isfinite(k) || k < 0.0) throw std::invalid_argument("kappa_max must be finite and >= 0");
}

ArcSegment ArcSegment::from_angle(double theta, double mean_length, double body_radius) {
    ArcSegment seg;
    seg.theta = theta;
    seg.mean_length = mean_length;
    seg.radius = theta != 0.0 ? mean_length / theta : std::numeric_limits<double>::infinity();
    seg.side_e = mean_length + body_radius * theta;
    seg.side_i = mean_length - body_radius * theta;
    return seg;
}

Vec2 Pose::heading() const { return {std::sin(phi), std::cos(phi)}; }

Vec2 Pose::bend_normal() const { return {std::cos(phi), -std::sin(phi)}; }

ArcSegment arc_from_tendons(double l0, const TendonState& t, double r, double min_side_fraction) {
    if (!(l0 >= 0.0) || !std::isfinite(l0)) throw ConstraintViolation("neutral length must be >= 0");
    if (!std::isfinite(t.dla) || !std::isfinite(t.dlb))
        throw ConstraintViolation("tendon displacement must be finite");
    if (t.dla > 0.0 || t.dlb > 0.0)
        throw ConstraintViolation("tendon displacement must be <= 0 (tendons only contract)");

    const double min_side = min_side_fraction * l0;
    const double slack = 1e-12 * l0;
    const double side_a = l0 + t.dla;
    const double side_b = l0 + t.dlb;
    if (side_a < min_side - slack || side_b < min_side - slack) {
        std::ostringstream msg;
        msg << "side length " << std::min(side_a, side_b) << " m below minimum " << min_side << " m";
        throw ConstraintViolation(msg.str());
    }

    ArcSegment seg;
    seg.side_e = side_a;
    seg.side_i = side_b;
    seg.mean_length = l0 + (t.dla + t.dlb) / 2.0;
    if (t.dla == t.dlb) return seg;

    const double diff = t.dla - t.dlb;
    seg.theta = diff / (2.0 * r);
    seg.radius = (2.0 * r * l0 + r * (t.dla + t.dlb)) / diff;
    return seg;
}

Mat2 frame_rotation(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat2 m;
    m << c, s, -s, c;
    return m;
}

LocalTransform local_transform(const ArcSegment& segment) {
    return {arc_translation(segment.theta, segment.mean_length), frame_rotation(segment.theta)};
}

Pose compose(const Pose& start, const ArcSegment& segment) {
    const Vec2 p = start.position() + frame_rotation(start.phi) *
                                          arc_translation(segment.theta, segment.mean_length);
    return {p.x(), p.y(), normalize_angle(start.phi + segment.theta)};
}

namespace {

// Walks the chain with the frame recursion p_{i+1} = R_i t_i + p_i, calling
// visit(frame angle, base point, segment) before stepping over each segment.
template <typename Visit>
Pose walk_chain(std::span<const ArcSegment> segments, Visit&& visit) {
    Vec2 p = Vec2::Zero();
    double accumulated = 0.0;
    for (const ArcSegment& seg : segments) {
        visit(accumulated, p, seg);
        p += frame_rotation(accumulated) * arc_translation(seg.theta, seg.mean_length);
        accumulated += seg.theta;
    }
    return {p.x(), p.y(), normalize_angle(accumulated)};
}

}  // namespace

Pose forward_kinematics(std::span<const ArcSegment> segments) {
    return walk_chain(segments, [](double, const Vec2&, const ArcSegment&) {});
}

Pose forward_kinematics(const SegmentChain& chain) { return forward_kinematics(chain.segments); }

double tip_orientation(const SegmentChain& chain) {
    double sum = 0.0;
    for (const ArcSegment& seg : chain.segments) sum += seg.theta;
    return normalize_angle(sum);
}

double BodyPolyline::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += (points[i] - points[i - 1]).norm();
    return total;
}

void append_arc_samples(const Pose& start, const ArcSegment& segment, double ds,
                        std::vector<Vec2>& out) {
    if (segment.mean_length <= 0.0) return;
    const Mat2 rot = frame_rotation(start.phi);
    const Vec2 origin = start.position();
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(segment.mean_length / ds)));
    for (std::size_t k = 1; k <= n; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        out.push_back(origin + rot * arc_translation(segment.theta * f, segment.mean_length * f));
    }
}

BodyPolyline discretize(const SegmentChain& chain, double ds, double body_radius) {
    if (!(ds > 0.0)) throw std::invalid_argument("discretization step must be positive");
    BodyPolyline body;
    body.body_radius = body_radius;
    body.points.emplace_back(0.0, 0.0);

    walk_chain(chain.segments, [&](double frame, const Vec2& base, const ArcSegment& seg) {
        if (seg.mean_length > 0.0) {
            const Mat2 rot = frame_rotation(frame);
            const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(seg.mean_length / ds)));
            for (std::size_t k = 1; k < n; ++k) {
                const double f = static_cast<double>(k) / static_cast<double>(n);
                body.points.push_back(base + rot * arc_translation(seg.theta * f, seg.mean_length * f));
            }
            // same expression as the recursion step, so the junction is bit-identical
            body.points.push_back(base + rot * arc_translation(seg.theta, seg.mean_length));
        }
        body.junctions.push_back(body.points.size() - 1);
    });
    return body;
}

}  // namespace vine
