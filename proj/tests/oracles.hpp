#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's kinematics or geometry code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

struct Tip {
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;  // accumulated, not wrapped
};

// Heading phi(s) measured clockwise from +y; dx/ds = sin phi, dy/ds = cos phi.
// Each (theta, length) piece has constant curvature theta/length. Position is
// integrated with composite Simpson, heading by integrating kappa the same way.
inline Tip integrate_chain(const std::vector<std::pair<double, double>>& pieces, int panels = 2000) {
    Tip t;
    for (const auto& [theta, len] : pieces) {
        if (len <= 0.0) continue;
        const double kappa = theta / len;
        const double h = len / panels;
        double sx = 0.0, sy = 0.0, sk = 0.0;
        for (int i = 0; i <= panels; ++i) {
            const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const double a = t.phi + kappa * (i * h);
            sx += w * std::sin(a);
            sy += w * std::cos(a);
            sk += w * kappa;
        }
        t.x += sx * h / 3.0;
        t.y += sy * h / 3.0;
        t.phi += sk * h / 3.0;
    }
    return t;
}

inline double wrap(double a) {
    const double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

struct P2 {
    double x, y;
};

// Brute force: sample the first segment at spacing ds and take the closest
// point of the second segment by projection.
inline double point_seg(P2 p, P2 a, P2 b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double l2 = vx * vx + vy * vy;
    double t = l2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double sampled_polyline_distance(const std::vector<P2>& body, const std::vector<P2>& obstacle,
                                        double ds = 1e-4) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
        const P2 a = body[i], b = body[i + 1];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const int n = std::max(1, static_cast<int>(std::ceil(len / ds)));
        for (int k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) / n;
            const P2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            for (std::size_t j = 0; j + 1 < obstacle.size(); ++j)
                best = std::min(best, point_seg(p, obstacle[j], obstacle[j + 1]));
        }
    }
    if (body.size() == 1)
        for (std::size_t j = 0; j + 1 < obstacle.size(); ++j)
            best = std::min(best, point_seg(body[0], obstacle[j], obstacle[j + 1]));
    return best;
}

// Closed-form circular arc in world coordinates, heading clockwise from +y.
inline Tip arc_by_hand(Tip start, double kappa, double len) {
    Tip t = start;
    if (kappa == 0.0) {
        t.x += len * std::sin(start.phi);
        t.y += len * std::cos(start.phi);
        return t;
    }
    const double end = start.phi + kappa * len;
    t.x += (std::cos(start.phi) - std::cos(end)) / kappa;
    t.y += (std::sin(end) - std::sin(start.phi)) / kappa;
    t.phi = end;
    return t;
}

}  // namespace oracle
