#include "vine/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace vine {

namespace {

constexpr double kLengthSlack = 1e-12;

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

double SweepSpec::kappa_bound(const RobotParams& params) const {
    return kappa_limit.value_or(params.kappa_max());
}

void SweepSpec::validate(const RobotParams& params) const {
    params.validate();
    if (!(max_length > 0.0)) throw std::invalid_argument("max_length must be positive");
    if (lock_events < 0) throw std::invalid_argument("lock_events must be >= 0");
    if (curvature_steps < 2 || length_steps < 2) throw std::invalid_argument("sweep steps must be >= 2");
    if (!(xy_resolution > 0.0)) throw std::invalid_argument("xy_resolution must be positive");
    if (!(ds > 0.0)) throw std::invalid_argument("ds must be positive");
    if (!(touch_tol >= 0.0)) throw std::invalid_argument("touch_tol must be >= 0");
    if (branch_cap == 0) throw std::invalid_argument("branch_cap must be positive");
    const double k = kappa_bound(params);
    if (!(k >= 0.0) || k > params.kappa_max() * (1.0 + 1e-12))
        throw std::invalid_argument("kappa range exceeds the robot's kappa_max");
}

int PhiSet::bin_of(double phi) {
    const int bin = static_cast<int>(std::lround(deg(normalize_angle(phi))));
    return bin == -180 ? 180 : bin;
}

void PhiSet::insert(double phi) {
    bins.insert(bin_of(phi));
    phi_min = std::min(phi_min, phi);
    phi_max = std::max(phi_max, phi);
}

void PhiSet::merge(const PhiSet& other) {
    bins.insert(other.bins.begin(), other.bins.end());
    phi_min = std::min(phi_min, other.phi_min);
    phi_max = std::max(phi_max, other.phi_max);
}

double PhiSet::span() const {
    if (bins.size() < 2) return 0.0;
    int largest_gap = (*bins.begin() + 360) - *bins.rbegin();
    for (auto it = std::next(bins.begin()); it != bins.end(); ++it)
        largest_gap = std::max(largest_gap, *it - *std::prev(it));
    return (360 - largest_gap) * std::numbers::pi / 180.0;
}

WorkspaceGrid::WorkspaceGrid(double resolution) : resolution_(resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
}

CellKey WorkspaceGrid::cell_of(const Vec2& p) const {
    return {std::llround(p.x() / resolution_), std::llround(p.y() / resolution_)};
}

Vec2 WorkspaceGrid::center(const CellKey& key) const {
    return {static_cast<double>(key.ix) * resolution_, static_cast<double>(key.iy) * resolution_};
}

void WorkspaceGrid::record(const CellKey& key, double phi) { cells_[key].insert(phi); }

void WorkspaceGrid::merge(const WorkspaceGrid& other) {
    if (other.resolution_ != resolution_) throw ResolutionMismatch("cannot merge grids of different resolution");
    for (const auto& [key, set] : other.cells_) cells_[key].merge(set);
}

WorkspaceGrid WorkspaceGrid::filtered(const std::function<bool(const Vec2&)>& keep) const {
    WorkspaceGrid out(resolution_);
    out.metadata = metadata;
    for (const auto& [key, set] : cells_)
        if (keep(center(key))) out.cells_.emplace(key, set);
    return out;
}

ArcToPoint arc_through(const Pose& start, const Vec2& target) {
    const Vec2 d = target - start.position();
    const double lateral = d.dot(start.bend_normal());
    const double forward = d.dot(start.heading());
    ArcToPoint arc;
    if (lateral == 0.0) {
        if (forward < 0.0) return arc;  // directly behind: no finite-curvature arc
        arc.reachable = true;
        arc.length = forward;
        return arc;
    }
    const double chord_sq = lateral * lateral + forward * forward;
    arc.reachable = true;
    arc.curvature = 2.0 * lateral / chord_sq;
    arc.theta = 2.0 * std::atan2(lateral, forward);
    arc.length = arc.theta / arc.curvature;
    return arc;
}

std::vector<double> curvature_grid(const RobotParams& params, const SweepSpec& spec) {
    const double k = spec.kappa_bound(params);
    std::vector<double> grid(static_cast<std::size_t>(spec.curvature_steps));
    const double n = static_cast<double>(spec.curvature_steps - 1);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = k * (2.0 * static_cast<double>(i) - n) / n;  // symmetric, exact 0 at the centre
    return grid;
}

std::vector<double> length_grid(const SweepSpec& spec) {
    std::vector<double> grid(static_cast<std::size_t>(spec.length_steps));
    const double n = static_cast<double>(spec.length_steps - 1);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = spec.max_length * static_cast<double>(i) / n;
    return grid;
}

namespace {

ArcSegment arc_of(double kappa, double length, double body_radius) {
    return ArcSegment::from_angle(kappa * length, length, body_radius);
}

// True when the piece of arc grown from `from` (a pose on the curve) by
// `piece` stays clear of obstacles.
bool piece_clear(const Pose& from, const ArcSegment& piece, const SweepSpec& spec, double body_radius,
                 const Environment& env, std::vector<Vec2>& scratch) {
    scratch.clear();
    scratch.push_back(from.position());
    append_arc_samples(from, piece, spec.ds, scratch);
    return contact(scratch, body_radius, env, spec.touch_tol).status != ContactStatus::penetrating;
}

}  // namespace

std::vector<LockPose> expand_lock_poses(const RobotParams& params, const SweepSpec& spec,
                                        const Environment* env, std::span<const LockPose> from) {
    const std::vector<double> kappas = curvature_grid(params, spec);
    const std::vector<double> lengths = length_grid(spec);
    const bool check = env != nullptr && !env->empty();
    std::vector<Vec2> scratch;
    std::vector<LockPose> out;

    for (const LockPose& start : from) {
        out.push_back(start);
        for (double kappa : kappas) {
            Pose prev = start.pose;
            for (std::size_t j = 1; j < lengths.size(); ++j) {
                const double used = start.used_length + lengths[j];
                if (used > spec.max_length + kLengthSlack) break;
                const double step = lengths[j] - lengths[j - 1];
                if (check && !piece_clear(prev, arc_of(kappa, step, params.body_radius), spec,
                                          params.body_radius, *env, scratch))
                    break;  // longer growth contains this prefix
                const Pose next = compose(start.pose, arc_of(kappa, lengths[j], params.body_radius));
                out.push_back({next, used});
                prev = next;
            }
        }
    }

    if (out.size() > spec.branch_cap) {
        // deterministic stride subsample, keeps the first (degenerate) pose
        std::vector<LockPose> kept;
        kept.reserve(spec.branch_cap);
        const double stride = static_cast<double>(out.size()) / static_cast<double>(spec.branch_cap);
        for (std::size_t i = 0; i < spec.branch_cap; ++i)
            kept.push_back(out[static_cast<std::size_t>(static_cast<double>(i) * stride)]);
        out = std::move(kept);
    }
    return out;
}

void sweep_final_segment(const RobotParams& params, const SweepSpec& spec, const Environment* env,
                         std::span<const LockPose> lock_poses, WorkspaceGrid& grid) {
    const std::vector<double> kappas = curvature_grid(params, spec);
    const std::vector<double> lengths = length_grid(spec);
    const double kappa_bound = spec.kappa_bound(params);
    const bool check = env != nullptr && !env->empty();
    std::vector<Vec2> scratch;
    std::unordered_set<CellKey, CellKeyHash> visited;

    for (const LockPose& start : lock_poses) {
        visited.clear();
        const double budget = spec.max_length - start.used_length;

        const auto try_cell = [&](const CellKey& cell) {
            if (!visited.insert(cell).second) return;
            const Vec2 target = grid.center(cell);
            if (env != nullptr && !env->bounds.contains(target)) return;
            const ArcToPoint arc = arc_through(start.pose, target);
            if (!arc.reachable) return;
            if (std::abs(arc.curvature) > kappa_bound * (1.0 + 1e-12)) return;
            if (arc.length > budget + kLengthSlack) return;
            const ArcSegment seg = ArcSegment::from_angle(arc.theta, arc.length, params.body_radius);
            if (check && !piece_clear(start.pose, seg, spec, params.body_radius, *env, scratch)) return;
            grid.record(cell, normalize_angle(start.pose.phi + arc.theta));
        };

        for (double kappa : kappas) {
            Pose prev = start.pose;
            for (std::size_t j = 0; j < lengths.size(); ++j) {
                if (lengths[j] > budget + kLengthSlack) break;
                Pose tip = start.pose;
                if (j > 0) {
                    const double step = lengths[j] - lengths[j - 1];
                    if (check && !piece_clear(prev, arc_of(kappa, step, params.body_radius), spec,
                                              params.body_radius, *env, scratch))
                        break;
                    tip = compose(start.pose, arc_of(kappa, lengths[j], params.body_radius));
                }
                ++grid.metadata.configurations;
                try_cell(grid.cell_of(tip.position()));
                prev = tip;
            }
        }
    }
}

WorkspaceGrid sweep(const RobotParams& params, const SweepSpec& spec, int lock_events, const Environment* env) {
    spec.validate(params);
    if (lock_events < 0) throw std::invalid_argument("lock_events must be >= 0");
    if (env) env->validate();

    WorkspaceGrid grid(spec.xy_resolution);
    grid.metadata.mode = lock_events == 0 ? "nolock" : lock_events == 1 ? "onelock"
                                                     : "lock" + std::to_string(lock_events);
    grid.metadata.spec = spec;
    grid.metadata.spec.lock_events = lock_events;
    grid.metadata.kappa_bound = spec.kappa_bound(params);
    grid.metadata.body_radius = params.body_radius;
    grid.metadata.constrained = env != nullptr && !env->empty();
    grid.metadata.environment_hash = env ? environment_hash(*env) : 0;

    std::vector<LockPose> poses{LockPose{}};
    for (int e = 0; e < lock_events; ++e) poses = expand_lock_poses(params, spec, env, poses);
    sweep_final_segment(params, spec, env, poses, grid);
    return grid;
}

WorkspaceGrid sweep_no_lock(const RobotParams& params, const SweepSpec& spec, const Environment* env) {
    return sweep(params, spec, 0, env);
}

WorkspaceGrid sweep_one_lock(const RobotParams& params, const SweepSpec& spec, const Environment* env) {
    return sweep(params, spec, std::max(1, spec.lock_events), env);
}

CoverageMetrics compare(const WorkspaceGrid& a, const WorkspaceGrid& b) {
    if (a.resolution() != b.resolution())
        throw ResolutionMismatch("workspace grids have different resolutions");
    CoverageMetrics m;
    m.count_a = a.size();
    m.count_b = b.size();
    for (const auto& [key, set] : a.cells())
        if (b.contains(key)) ++m.a_in_b;
    m.containment = m.count_a ? static_cast<double>(m.a_in_b) / static_cast<double>(m.count_a) : 1.0;
    m.count_ratio = m.count_a ? static_cast<double>(m.count_b) / static_cast<double>(m.count_a)
                              : std::numeric_limits<double>::infinity();

    const auto stats = [](const WorkspaceGrid& g, double& singleton, double& mean_span, double& max_span) {
        std::size_t singles = 0;
        double total = 0.0;
        for (const auto& [key, set] : g.cells()) {
            if (set.count() == 1) ++singles;
            const double s = set.span();
            total += s;
            max_span = std::max(max_span, s);
        }
        const double n = static_cast<double>(g.size());
        singleton = g.size() ? static_cast<double>(singles) / n : 1.0;
        mean_span = g.size() ? total / n : 0.0;
    };
    stats(a, m.singleton_fraction_a, m.mean_span_a, m.max_span_a);
    stats(b, m.singleton_fraction_b, m.mean_span_b, m.max_span_b);
    return m;
}

}  // namespace vine
