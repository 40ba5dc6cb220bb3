// One line per acceptance criterion; exit status is nonzero if any fails.

#include "oracles.hpp"
#include "session_props.hpp"

#include "vine/cli.hpp"
#include "vine/config.hpp"
#include "vine/script.hpp"
#include "vine/session.hpp"
#include "vine/statics.hpp"
#include "vine/workspace.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace vine;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs >= budget_s) {
        o.pass = false;
        o.detail << " [over time budget " << budget_s << " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %s %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(), secs);
    std::fflush(stdout);
}

double deg(double r) { return r * 180.0 / std::numbers::pi; }

void worked_example(Outcome& o) {
    std::ostringstream out, err;
    const int code = cli::run({"feasibility", "--theta-deg", "15", "--body-pressure", "28000", "--radius", "0.016",
                               "--offset", "3", "--lock-span", "0.02", "--json"},
                              out, err);
    o.require(code == 0, "exit code " + std::to_string(code));
    const json j = json::parse(out.str());
    const double t = j["tension_n"], k = j["curvature_per_m"], p = j["required_lock_pressure_pa"];
    o.detail << " T=" << t << " N, kappa=" << k << " 1/m, P_lock=" << p / 1e3 << " kPa";
    o.require(std::abs(t - 8.26) <= 0.01, "T");
    o.require(std::abs(k - 13.1) <= 0.1, "kappa");
    o.require(std::abs(p - 20e3) <= 0.25 * 20e3, "P_lock");
}

void tension_lines(Outcome& o) {
    const double r = 0.016;
    const double slope = std::numbers::pi * r * r / 2;
    const double ps[] = {14e3, 21e3, 28e3, 34e3, 41e3};
    double worst_slope = 0.0, worst_angle = 0.0;
    std::vector<double> ts;
    for (double p : ps) {
        WrinkleModel w;
        w.effective_radius = r;
        w.offset = 3.0;
        w.pressure = p;
        const double t0 = required_locking_pressure(w, FrictionModel{}, 0.0, 0.02).tension;
        for (double a = 0.0; a <= 90.0; a += 5.0) {
            const double t = required_locking_pressure(w, FrictionModel{}, a * std::numbers::pi / 180, 0.02).tension;
            worst_angle = std::max(worst_angle, std::abs(t - t0));
        }
        ts.push_back(t0);
    }
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j)
            worst_slope = std::max(worst_slope, std::abs((ts[j] - ts[i]) / (ps[j] - ps[i]) - slope) / slope);
    o.detail << " max angle variation " << worst_angle << " N, max slope rel. error " << worst_slope;
    o.require(worst_angle == 0.0, "tension varies with angle");
    o.require(worst_slope <= 1e-12, "slope");
}

void friction_lines(Outcome& o) {
    FrictionModel f;
    o.require(f.mu == 0.594 && f.adhesion == units::n_per_cm2(0.376), "default constants");
    double worst = 0.0;
    for (double p = 0.0; p <= 60e3; p += 500.0) {
        const double want = 0.594 * p + 0.376e4;
        worst = std::max(worst, std::abs(friction_capacity_per_area(f, p) - want) / want);
    }
    // second differences vanish for an affine function
    double curvature = 0.0;
    for (double p = 1e3; p <= 59e3; p += 1e3)
        curvature = std::max(curvature, std::abs(friction_capacity_per_area(f, p - 1e3) - 2 * friction_capacity_per_area(f, p) +
                                                 friction_capacity_per_area(f, p + 1e3)));
    o.detail << " affine rel. error " << worst << ", second difference " << curvature << " Pa";
    o.require(worst <= 1e-12 && curvature <= 1e-9, "affine");

    const auto monotone = [](const CurvatureDerating& d) {
        double prev = d(0.0);
        if (prev != 1.0) return false;
        for (double k = 0.0; k <= 100.0; k += 0.01) {
            const double v = d(k);
            if (v > prev || v < 0.0 || v > 1.0) return false;
            prev = v;
        }
        return true;
    };
    o.require(monotone(f.derate), "default derating monotone");
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tables = 0;
    for (; tables < 200; ++tables) {
        std::vector<std::pair<double, double>> pts{{0.0, 1.0}};
        const int n = 1 + static_cast<int>(u(rng) * 8);
        for (int i = 0; i < n; ++i) pts.push_back({pts.back().first + 0.01 + 15 * u(rng), pts.back().second * u(rng)});
        if (!monotone(CurvatureDerating::table(pts))) {
            o.require(false, "user table monotone");
            break;
        }
    }
    o.detail << ", derating monotone for default and " << tables << " random tables";
}

void kinematics_oracle(Outcome& o) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> th(-std::numbers::pi, std::numbers::pi), len(0.005, 0.2);
    std::uniform_int_distribution<int> count(1, 10);
    double worst_pos = 0.0, worst_phi = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::pair<double, double>> pieces(static_cast<std::size_t>(count(rng)));
        SegmentChain chain;
        for (auto& pc : pieces) {
            pc = {th(rng), len(rng)};
            chain.segments.push_back(ArcSegment::from_angle(pc.first, pc.second, 0.0115));
        }
        const Pose p = forward_kinematics(chain);
        const oracle::Tip t = oracle::integrate_chain(pieces);
        worst_pos = std::max(worst_pos, std::hypot(p.x - t.x, p.y - t.y));
        worst_phi = std::max(worst_phi, std::abs(angle_difference(p.phi, oracle::wrap(t.phi))));
    }
    o.detail << " 1000 chains, max tip error " << worst_pos << " m, max angle error " << worst_phi << " rad";
    o.require(worst_pos < 1e-9, "position");
    o.require(worst_phi < 1e-12, "orientation");
}

SweepSpec acceptance_spec() {
    SweepSpec s;
    s.curvature_steps = 50;
    s.length_steps = 50;
    s.xy_resolution = 0.01;
    return s;
}

void free_workspace(Outcome& o) {
    const RobotParams p;
    const SweepSpec s = acceptance_spec();
    const WorkspaceGrid none = sweep_no_lock(p, s);
    const WorkspaceGrid one = sweep_one_lock(p, s);
    std::size_t singles = 0;
    for (const auto& [key, set] : none.cells()) singles += set.count() == 1;
    bool strict_superset = one.size() > none.size();
    for (const auto& [key, set] : none.cells()) {
        if (!one.contains(key)) {
            strict_superset = false;
            continue;
        }
        for (int b : set.bins)
            if (!one.cells().at(key).bins.count(b)) strict_superset = false;
    }
    double widest = 0.0;
    for (const auto& [key, set] : one.cells()) widest = std::max(widest, set.span());
    o.detail << " no-lock " << none.size() << " cells, singleton " << singles << "/" << none.size()
             << "; one-lock " << one.size() << " cells, widest phi range " << deg(widest) << " deg";
    o.require(singles == none.size() && none.size() > 0, "singleton fraction");
    o.require(strict_superset, "strict containment");
    o.require(deg(widest) > 45.0, "phi range");
}

void constrained_workspace(Outcome& o) {
    const RobotParams p;
    const SweepSpec s = acceptance_spec();

    const WallGapPreset wall;
    const Environment wall_env = make_preset(wall);
    const auto beyond_wall = [&](const Vec2& c) { return c.x() < wall.wall_x; };
    const WorkspaceGrid w0 = sweep_no_lock(p, s, &wall_env).filtered(beyond_wall);
    const WorkspaceGrid w1 = sweep_one_lock(p, s, &wall_env).filtered(beyond_wall);
    const CoverageMetrics wm = compare(w0, w1);
    o.detail << " beyond wall: no-lock " << w0.size() << ", one-lock " << w1.size() << " (containment "
             << wm.containment << ")";
    o.require(w1.size() > w0.size() && wm.containment == 1.0, "wall gap");

    const HorizontalBarPreset bar;
    const Environment bar_env = make_preset(bar);
    const double top = bar.bar_y + bar.thickness / 2;
    const auto behind = [&](const Vec2& c) { return c.x() >= bar.x_min && c.x() <= bar.x_max && c.y() > top; };
    const WorkspaceGrid b0 = sweep_no_lock(p, s, &bar_env).filtered(behind);
    const WorkspaceGrid b1 = sweep_one_lock(p, s, &bar_env).filtered(behind);
    o.detail << "; behind bar: no-lock " << b0.size() << ", one-lock " << b1.size();
    o.require(b0.size() == 0 && b1.size() >= 1, "behind obstacle");
}

void session_invariants(Outcome& o) {
    auto settings = std::make_shared<SessionSettings>();
    settings->environment = preset("wall_gap");
    std::mt19937_64 rng(20240);
    props::Tally t;
    for (long i = 0; i < 10000; ++i) props::check_sequence(props::random_sequence(rng), settings, i, t);
    o.detail << " " << t.sequences << " sequences, " << t.commands << " commands (" << t.accepted << " accepted), "
             << t.inverse_checks << " inverse-pair checks, " << t.failures.size() << " violations";
    for (const std::string& f : t.failures) o.require(false, f);
    o.require(t.sequences == 10000, "sequence count");
}

void s_curve_script(Outcome& o) {
    const auto cmds = parse_script(
        "set_pressure body 40000\n"
        "grow 0.1\n"
        "steer 0 -0.01\n"
        "lock\n"
        "steer -0.01 0\n"
        "grow 0.1\n");
    const ScriptRun run = run_script(cmds, std::make_shared<SessionSettings>(), true);
    const SegmentChain& c = run.final_state.chain;
    o.require(c.segments.size() == 2, "segment count");
    if (c.segments.size() != 2) return;
    const double t1 = c.segments[0].theta, t2 = c.segments[1].theta;
    o.require(t1 * t2 < 0.0, "opposite curvature");

    const double theta = 0.01 / 0.023, len = 0.1 - 0.005;
    const oracle::Tip a = oracle::arc_by_hand({}, theta / len, len);
    const oracle::Tip b = oracle::arc_by_hand(a, -theta / len, len);
    const Pose tip = forward_kinematics(c);
    const double err = std::hypot(tip.x - b.x, tip.y - b.y);
    o.detail << " N=2, theta=(" << t1 << ", " << t2 << ") rad, tip (" << tip.x << ", " << tip.y << "), error "
             << err << " m";
    o.require(err < 1e-9, "tip pose");
}

}  // namespace

int main() {
    criterion("C1", "worked locking example via feasibility CLI", 1.0, worked_example);
    criterion("C2", "wrinkle tension model lines", 0.0, tension_lines);
    criterion("C3", "friction model line and derating monotonicity", 0.0, friction_lines);
    criterion("C4", "kinematics vs curvature-integration oracle", 10.0, kinematics_oracle);
    criterion("C5", "free-space workspace properties", 60.0, free_workspace);
    criterion("C6", "constrained workspace (wall gap, horizontal bar)", 120.0, constrained_workspace);
    criterion("C7", "session invariants over random command sequences", 0.0, session_invariants);
    criterion("C8", "steer/lock/steer/grow script gives an S-curve", 0.0, s_curve_script);
    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
