#pragma once

#include "vine/kinematics.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vine {

namespace units {
constexpr double kPaPerNPerCm2 = 1.0e4;
constexpr double n_per_cm2(double v) { return v * kPaPerNPerCm2; }
constexpr double kpa(double v) { return v * 1.0e3; }
}  // namespace units

/// Main-body pressure below which the body does not evert.
constexpr double kGrowthThresholdPa = 34.5e3;
/// Highest locking-body pressure covered by the friction characterization.
constexpr double kDefaultMaxLockPressurePa = 34.5e3;

class DegenerateGeometry : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Wrinkle (buckle) hold model: T = pi r^2 P / 2 - K, clamped at zero.
struct WrinkleModel {
    double effective_radius = 0.016;  // fitted
    double offset = 3.0;              // K, fitted (N)
    double pressure = 0.0;            // main body gauge pressure (Pa)

    void validate() const;
};

double wrinkle_tension(const WrinkleModel& model);

/// Full moment balance about the hinge opposite the wrinkle.
struct WrinkleGeometry {
    Vec2 d_tip;             // hinge -> tip cross-section center
    Vec2 d_ten;             // hinge -> any point on the tendon line
    Vec2 tip_normal;        // unit direction of the pressure force on the tip
    Vec2 tendon_direction;  // unit direction of the tendon line
    double tip_area = 0.0;  // pi r^2
};

/// Wrinkle geometry for a short section of radius r deflected by `deflection`
/// about a hinge on the wall opposite the tendon. The tip cross-section sits
/// `tip_offset` past the hinge and the tendon is anchored `anchor_spacing`
/// either side of it.
WrinkleGeometry wrinkle_geometry(double r, double deflection, double tip_offset, double anchor_spacing);

/// T = |d_tip x (A P n)| / |d_ten x t|. Throws DegenerateGeometry when the
/// tendon line passes through the hinge.
double wrinkle_tension_general(const WrinkleGeometry& geometry, double pressure);

/// Multiplier in [0, 1] applied to straight-body friction at curvature kappa.
class CurvatureDerating {
public:
    /// max(0, 1 - beta * kappa)
    static CurvatureDerating linear(double beta);
    /// Piecewise-linear through (kappa, factor) points; held constant past the
    /// last point. First point must be (0, 1) and factors non-increasing.
    static CurvatureDerating table(std::vector<std::pair<double, double>> points);

    double operator()(double kappa) const;

    bool is_linear() const { return std::holds_alternative<Linear>(model_); }
    double beta() const;
    const std::vector<std::pair<double, double>>& points() const;

private:
    struct Linear {
        double beta;
    };
    using Table = std::vector<std::pair<double, double>>;

    explicit CurvatureDerating(std::variant<Linear, Table> m) : model_(std::move(m)) {}
    std::variant<Linear, Table> model_;
};

struct FrictionModel {
    double mu = 0.594;
    double adhesion = units::n_per_cm2(0.376);       // C (Pa)
    double contact_width = std::numbers::pi * 0.011;  // full wrap of the 11 mm locking body
    CurvatureDerating derate = CurvatureDerating::linear(0.02);

    void validate() const;
};

/// Straight-body friction per unit contact area: mu P + C.
double friction_capacity_per_area(const FrictionModel& f, double lock_pressure);

/// derate(kappa) * w * (mu P + C), in N/m.
double friction_capacity_per_length(const FrictionModel& f, double lock_pressure, double kappa);

struct LockingRequirement {
    double tension = 0.0;                      // N
    double curvature = 0.0;                    // 1/m
    double required_tension_per_length = 0.0;  // N/m
    double required_pressure = 0.0;            // Pa; +inf when no pressure suffices
    double max_pressure = kDefaultMaxLockPressurePa;
    bool feasible = true;
    std::string reason;
};

LockingRequirement required_locking_pressure(const WrinkleModel& wrinkle, const FrictionModel& friction,
                                             double theta, double lock_span,
                                             double max_pressure = kDefaultMaxLockPressurePa);

/// Growth happens at or above the threshold.
bool growth_gate(double body_pressure, double threshold = kGrowthThresholdPa);

}  // namespace vine
