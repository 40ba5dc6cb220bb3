#pragma once

#include "vine/kinematics.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vine {

struct Bounds {
    Vec2 min{-1.0, -1.0};
    Vec2 max{1.0, 1.0};

    bool contains(const Vec2& p) const {
        return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
    }
    bool valid() const { return max.x() > min.x() && max.y() > min.y(); }
};

/// Thick polyline obstacle.
struct Obstacle {
    std::string id;
    std::vector<Vec2> polyline;
    double thickness = 0.0;
};

struct Environment {
    std::vector<Obstacle> obstacles;
    Bounds bounds;

    bool empty() const { return obstacles.empty(); }
    /// Throws std::invalid_argument on malformed obstacles or bounds.
    void validate() const;
};

constexpr double kDefaultObstacleThickness = 0.005;
constexpr double kDefaultTouchTolerance = 0.001;

/// Vertical wall at x = wall_x spanning the bounds, with an opening of
/// gap_height centered on gap_center_y.
Environment wall_with_gap(double wall_x, double gap_center_y, double gap_height,
                          Bounds bounds = {}, double thickness = kDefaultObstacleThickness);

/// Horizontal bar at y = bar_y from x_min to x_max.
Environment horizontal_bar(double bar_y, double x_min, double x_max, Bounds bounds = {},
                           double thickness = kDefaultObstacleThickness);

// Scene presets. Dimensions are chosen for this project; they are not
// measurements of any physical test rig.
struct WallGapPreset {
    double wall_x = -0.10;
    double gap_center_y = 0.20;
    double gap_height = 0.07;
    double thickness = kDefaultObstacleThickness;
    Bounds bounds{{-0.5, -0.1}, {0.5, 0.6}};
};

struct HorizontalBarPreset {
    double bar_y = 0.20;
    double x_min = -0.05;
    double x_max = 0.05;
    double thickness = kDefaultObstacleThickness;
    Bounds bounds{{-0.5, -0.1}, {0.5, 0.6}};
};

Environment make_preset(const WallGapPreset& p);
Environment make_preset(const HorizontalBarPreset& p);

/// "wall_gap", "horizontal_bar" or "free". Throws std::invalid_argument otherwise.
Environment preset(std::string_view name);
bool is_preset_name(std::string_view name);

enum class ContactStatus { clear, touching, penetrating };

std::string_view to_string(ContactStatus status);

struct ContactReport {
    ContactStatus status = ContactStatus::clear;
    double min_clearance = std::numeric_limits<double>::infinity();
    Vec2 body_point = Vec2::Zero();
    Vec2 obstacle_point = Vec2::Zero();
    std::string obstacle_id;
};

/// Clearance between the inflated body centerline and every obstacle.
/// Negative clearance below -touch_tol is penetration; within +-touch_tol is touching.
ContactReport contact(const BodyPolyline& body, const Environment& env,
                      double touch_tol = kDefaultTouchTolerance);

/// Same query on a bare list of centerline points.
ContactReport contact(std::span<const Vec2> points, double body_radius, const Environment& env,
                      double touch_tol = kDefaultTouchTolerance);

/// Distance from p to segment ab; `closest` receives the foot point.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, Vec2* closest = nullptr);

/// Distance between segments ab and cd with witness points.
double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                                Vec2* on_ab = nullptr, Vec2* on_cd = nullptr);

/// Stable 64-bit FNV-1a digest of the environment's canonical JSON form.
std::uint64_t environment_hash(const Environment& env);

}  // namespace vine
