#include "vine/statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vine {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

void WrinkleModel::validate() const {
    if (!(effective_radius > 0.0)) throw std::invalid_argument("wrinkle effective_radius must be positive");
    if (!(offset >= 0.0)) throw std::invalid_argument("wrinkle offset K must be >= 0");
    if (!(pressure >= 0.0)) throw std::invalid_argument("body pressure must be >= 0");
}

double wrinkle_tension(const WrinkleModel& m) {
    const double r = m.effective_radius;
    return std::max(0.0, std::numbers::pi * r * r * m.pressure / 2.0 - m.offset);
}

WrinkleGeometry wrinkle_geometry(double r, double deflection, double tip_offset, double anchor_spacing) {
    const Mat2 rot = frame_rotation(deflection);
    const Vec2 proximal_anchor(2.0 * r, -anchor_spacing);
    const Vec2 distal_anchor = rot * Vec2(2.0 * r, anchor_spacing);

    WrinkleGeometry g;
    g.d_tip = rot * Vec2(r, tip_offset);
    g.tip_normal = rot * Vec2(0.0, 1.0);
    g.d_ten = proximal_anchor;
    g.tendon_direction = (distal_anchor - proximal_anchor).normalized();
    g.tip_area = std::numbers::pi * r * r;
    return g;
}

double wrinkle_tension_general(const WrinkleGeometry& g, double pressure) {
    const double lever = std::abs(cross(g.d_ten, g.tendon_direction.normalized()));
    if (!(lever > 1e-12)) throw DegenerateGeometry("tendon line passes through the moment center");
    const double moment = std::abs(cross(g.d_tip, g.tip_area * pressure * g.tip_normal.normalized()));
    return moment / lever;
}

CurvatureDerating CurvatureDerating::linear(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("derating beta must be >= 0");
    return CurvatureDerating(Linear{beta});
}

CurvatureDerating CurvatureDerating::table(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("derating table is empty");
    if (points.front().first != 0.0 || points.front().second != 1.0)
        throw std::invalid_argument("derating table must start at (0, 1)");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].first > points[i - 1].first))
            throw std::invalid_argument("derating table curvatures must be strictly increasing");
        if (points[i].second > points[i - 1].second)
            throw std::invalid_argument("derating table factors must be non-increasing");
    }
    if (points.back().second < 0.0) throw std::invalid_argument("derating factors must be >= 0");
    return CurvatureDerating(std::move(points));
}

double CurvatureDerating::operator()(double kappa) const {
    kappa = std::abs(kappa);
    if (const auto* lin = std::get_if<Linear>(&model_)) return std::max(0.0, 1.0 - lin->beta * kappa);

    const auto& pts = std::get<Table>(model_);
    if (kappa >= pts.back().first) return pts.back().second;
    const auto hi = std::upper_bound(pts.begin(), pts.end(), kappa,
                                     [](double k, const auto& p) { return k < p.first; });
    const auto lo = hi - 1;
    const double t = (kappa - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double CurvatureDerating::beta() const {
    if (const auto* lin = std::get_if<Linear>(&model_)) return lin->beta;
    throw std::logic_error("derating is a table");
}

const std::vector<std::pair<double, double>>& CurvatureDerating::points() const {
    return std::get<Table>(model_);
}

void FrictionModel::validate() const {
    if (!(mu >= 0.0)) throw std::invalid_argument("friction mu must be >= 0");
    if (!(adhesion >= 0.0)) throw std::invalid_argument("adhesion C must be >= 0");
    if (!(contact_width > 0.0)) throw std::invalid_argument("contact width must be positive");
}

double friction_capacity_per_area(const FrictionModel& f, double lock_pressure) {
    return f.mu * lock_pressure + f.adhesion;
}

double friction_capacity_per_length(const FrictionModel& f, double lock_pressure, double kappa) {
    return f.derate(kappa) * f.contact_width * friction_capacity_per_area(f, lock_pressure);
}

LockingRequirement required_locking_pressure(const WrinkleModel& wrinkle, const FrictionModel& friction,
                                             double theta, double lock_span, double max_pressure) {
    if (!(lock_span > 0.0)) throw std::invalid_argument("lock span must be positive");

    LockingRequirement req;
    req.max_pressure = max_pressure;
    req.tension = wrinkle_tension(wrinkle);
    req.curvature = std::abs(theta) / lock_span;
    req.required_tension_per_length = req.tension / lock_span;
    if (req.tension <= 0.0) return req;

    const double factor = friction.derate(req.curvature);
    if (factor <= 0.0) {
        req.required_pressure = std::numeric_limits<double>::infinity();
        req.feasible = false;
        req.reason = "friction fully derated at this curvature";
        return req;
    }

    const double per_area = req.required_tension_per_length / (factor * friction.contact_width);
    double pressure = 0.0;
    if (per_area > friction.adhesion) {
        pressure = friction.mu > 0.0 ? (per_area - friction.adhesion) / friction.mu
                                     : std::numeric_limits<double>::infinity();
    }
    req.required_pressure = pressure;
    if (pressure > max_pressure) {
        req.feasible = false;
        req.reason = "required locking pressure exceeds the configured maximum";
    }
    return req;
}

bool growth_gate(double body_pressure, double threshold) { return body_pressure >= threshold; }

}  // namespace vine
