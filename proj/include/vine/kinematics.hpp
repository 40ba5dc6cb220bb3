#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace vine {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Angles are measured clockwise from the base +y axis, so a positive
// central angle bends the body toward +x.

class ConstraintViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Smallest signed difference a - b, wrapped into (-pi, pi].
double angle_difference(double a, double b);

struct RobotParams {
    double body_radius = 0.0115;           // 23 mm main body
    double lock_body_radius = 0.0055;      // 11 mm locking body
    double segment_neutral_length = 0.1;
    double min_side_fraction = 0.5;        // catheter spacing keeps l_e, l_i >= l/2
    std::optional<double> kappa_max_override;

    /// Curvature bound implied by the side-length rule:
    /// (1 - f) / ((1 + f) r). For f = 0.5 this is 1 / (3 r).
    double kappa_max() const;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Signed tendon-side length changes; contraction is negative.
struct TendonState {
    double dla = 0.0;
    double dlb = 0.0;

    friend bool operator==(const TendonState&, const TendonState&) = default;
};

struct ArcSegment {
    double theta = 0.0;                                         // central angle (rad)
    double radius = std::numeric_limits<double>::infinity();    // signed; +inf when straight
    double mean_length = 0.0;
    double side_e = 0.0;  // side a, longer when theta > 0
    double side_i = 0.0;  // side b

    bool straight() const { return theta == 0.0; }
    double curvature() const { return mean_length > 0.0 ? theta / mean_length : 0.0; }

    /// Builds a segment directly from its central angle and arc length.
    static ArcSegment from_angle(double theta, double mean_length, double body_radius);

    friend bool operator==(const ArcSegment&, const ArcSegment&) = default;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;

    Vec2 position() const { return {x, y}; }
    /// Unit tangent of the body at this pose.
    Vec2 heading() const;
    /// Unit normal on the side a positive curvature bends toward.
    Vec2 bend_normal() const;

    friend bool operator==(const Pose&, const Pose&) = default;
};

struct SegmentChain {
    std::vector<ArcSegment> segments;  // index 0 is the base segment
    std::size_t locked_count = 0;

    bool valid() const { return locked_count <= segments.size(); }

    friend bool operator==(const SegmentChain&, const SegmentChain&) = default;
};

/// Arc geometry from tendon displacements on a segment of neutral length l0.
/// Throws ConstraintViolation if a displacement is positive or a side drops
/// below min_side_fraction * l0.
ArcSegment arc_from_tendons(double l0, const TendonState& tendons, double body_radius,
                            double min_side_fraction = 0.5);

struct LocalTransform {
    Vec2 translation;
    Mat2 rotation;
};

/// Frame of the segment end expressed in the segment's base frame.
LocalTransform local_transform(const ArcSegment& segment);

/// Rotation taking a frame with orientation phi into the base frame.
Mat2 frame_rotation(double phi);

/// Pose reached by growing `segment` from `start`.
Pose compose(const Pose& start, const ArcSegment& segment);

Pose forward_kinematics(std::span<const ArcSegment> segments);
Pose forward_kinematics(const SegmentChain& chain);

double tip_orientation(const SegmentChain& chain);

struct BodyPolyline {
    std::vector<Vec2> points;
    std::vector<std::size_t> junctions;  // index of each segment end in `points`
    double body_radius = 0.0;

    double length() const;
};

/// Centerline samples at spacing <= ds, including every junction and the tip.
BodyPolyline discretize(const SegmentChain& chain, double ds, double body_radius);

/// Appends samples of one arc grown from `start` (the start point itself is
/// not appended).
void append_arc_samples(const Pose& start, const ArcSegment& segment, double ds,
                        std::vector<Vec2>& out);

}  // namespace vine
