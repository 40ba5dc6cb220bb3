#pragma once

#include "vine/environment.hpp"
#include "vine/kinematics.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace vine {

class ResolutionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
    double max_length = 0.4;
    int lock_events = 1;
    int curvature_steps = 50;
    int length_steps = 50;
    std::optional<double> kappa_limit;  // defaults to RobotParams::kappa_max()
    double xy_resolution = 0.01;
    double ds = 0.005;                  // collision discretization
    double touch_tol = kDefaultTouchTolerance;
    std::size_t branch_cap = 20000;     // lock poses kept per event when lock_events > 1

    double kappa_bound(const RobotParams& params) const;
    void validate(const RobotParams& params) const;
};

struct CellKey {
    std::int64_t ix = 0;
    std::int64_t iy = 0;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        return std::hash<std::int64_t>{}(k.ix * 73856093LL ^ k.iy * 19349663LL);
    }
};

/// Approach angles reached in one cell: 1-degree bins plus the raw extremes.
struct PhiSet {
    std::set<int> bins;  // whole degrees in (-180, 180]
    double phi_min = std::numeric_limits<double>::infinity();
    double phi_max = -std::numeric_limits<double>::infinity();

    static int bin_of(double phi);

    void insert(double phi);
    void merge(const PhiSet& other);
    std::size_t count() const { return bins.size(); }
    /// Smallest circular arc (rad) covering every bin.
    double span() const;

    friend bool operator==(const PhiSet&, const PhiSet&) = default;
};

struct WorkspaceMetadata {
    std::string mode;
    SweepSpec spec;
    double kappa_bound = 0.0;
    double body_radius = 0.0;
    bool constrained = false;
    std::uint64_t environment_hash = 0;
    std::uint64_t configurations = 0;  // probe configurations evaluated
};

class WorkspaceGrid {
public:
    explicit WorkspaceGrid(double resolution = 0.01);

    double resolution() const { return resolution_; }
    CellKey cell_of(const Vec2& p) const;
    Vec2 center(const CellKey& key) const;

    void record(const CellKey& key, double phi);
    void merge(const WorkspaceGrid& other);

    const std::map<CellKey, PhiSet>& cells() const { return cells_; }
    bool contains(const CellKey& key) const { return cells_.count(key) != 0; }
    std::size_t size() const { return cells_.size(); }

    /// Copy restricted to cells whose center satisfies `keep`.
    WorkspaceGrid filtered(const std::function<bool(const Vec2&)>& keep) const;

    WorkspaceMetadata metadata;

    friend bool operator==(const WorkspaceGrid& a, const WorkspaceGrid& b) {
        return a.resolution_ == b.resolution_ && a.cells_ == b.cells_;
    }

private:
    double resolution_;
    std::map<CellKey, PhiSet> cells_;
};

/// Pose at which a segment is locked, with the body length already used.
struct LockPose {
    Pose pose;
    double used_length = 0.0;
};

/// Unique circular arc leaving `start` along its heading and passing through `target`.
struct ArcToPoint {
    bool reachable = false;
    double curvature = 0.0;
    double theta = 0.0;
    double length = 0.0;
};

ArcToPoint arc_through(const Pose& start, const Vec2& target);

std::vector<double> curvature_grid(const RobotParams& params, const SweepSpec& spec);
std::vector<double> length_grid(const SweepSpec& spec);

/// Lock poses reachable by one more locked segment from each of `from`.
/// Every pose in `from` is kept (a zero-length segment), and growth stops at
/// the first colliding prefix.
std::vector<LockPose> expand_lock_poses(const RobotParams& params, const SweepSpec& spec,
                                        const Environment* env, std::span<const LockPose> from);

/// Grows a final free segment from each lock pose. Probe configurations on the
/// (curvature, length) grid find the cells the tip visits; each visited cell
/// records the approach angle of the final arc re-aimed at the cell center,
/// provided that arc is within limits and collision-free.
void sweep_final_segment(const RobotParams& params, const SweepSpec& spec, const Environment* env,
                         std::span<const LockPose> lock_poses, WorkspaceGrid& grid);

WorkspaceGrid sweep(const RobotParams& params, const SweepSpec& spec, int lock_events,
                    const Environment* env = nullptr);

/// Constant-curvature robot with no locking.
WorkspaceGrid sweep_no_lock(const RobotParams& params, const SweepSpec& spec,
                            const Environment* env = nullptr);

/// Robot that locks spec.lock_events times (1 unless overridden).
WorkspaceGrid sweep_one_lock(const RobotParams& params, const SweepSpec& spec,
                             const Environment* env = nullptr);

struct CoverageMetrics {
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    std::size_t a_in_b = 0;
    double containment = 0.0;   // fraction of a's cells present in b
    double count_ratio = 0.0;   // count_b / count_a
    double singleton_fraction_a = 0.0;
    double singleton_fraction_b = 0.0;
    double mean_span_a = 0.0;   // rad
    double mean_span_b = 0.0;
    double max_span_a = 0.0;
    double max_span_b = 0.0;
};

/// Throws ResolutionMismatch when the grids use different cell sizes.
CoverageMetrics compare(const WorkspaceGrid& a, const WorkspaceGrid& b);

}  // namespace vine
