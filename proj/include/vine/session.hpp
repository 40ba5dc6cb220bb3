#pragma once

#include "vine/environment.hpp"
#include "vine/kinematics.hpp"
#include "vine/statics.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vine {

class InvalidCommand : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything a session needs besides its mutable state.
struct SessionSettings {
    RobotParams robot;
    WrinkleModel wrinkle;  // pressure field unused; the session supplies body pressure
    FrictionModel friction;
    double max_lock_pressure = kDefaultMaxLockPressurePa;
    double growth_threshold = kGrowthThresholdPa;
    double touch_tol = kDefaultTouchTolerance;
    double ds = 0.002;  // body discretization for collision checks
    double initial_body_pressure = 0.0;
    double initial_lock_pressure = 0.0;
    Environment environment;
};

namespace cmd {

struct Steer {
    double dla = 0.0;
    double dlb = 0.0;
    friend bool operator==(const Steer&, const Steer&) = default;
};
struct Grow {
    double length = 0.0;
    std::optional<double> body_pressure;
    friend bool operator==(const Grow&, const Grow&) = default;
};
struct Lock {
    friend bool operator==(const Lock&, const Lock&) = default;
};
struct Unlock {
    friend bool operator==(const Unlock&, const Unlock&) = default;
};
struct Retract {
    double length = 0.0;
    friend bool operator==(const Retract&, const Retract&) = default;
};
enum class PressureTarget { body, lock };
struct SetPressure {
    PressureTarget target = PressureTarget::body;
    double pressure = 0.0;
    friend bool operator==(const SetPressure&, const SetPressure&) = default;
};
struct Reset {
    friend bool operator==(const Reset&, const Reset&) = default;
};

}  // namespace cmd

using Command = std::variant<cmd::Steer, cmd::Grow, cmd::Lock, cmd::Unlock, cmd::Retract, cmd::SetPressure,
                             cmd::Reset>;

std::string_view command_name(const Command& command);

// Session lengths are tracked in whole nanometres so growth and retraction
// cancel exactly.
std::int64_t to_nanometres(double metres);
double to_metres(std::int64_t nanometres);

/// Neutral length and tendon displacements that generate one segment.
struct SegmentDrive {
    std::int64_t l0_nm = 0;
    TendonState tendons;

    double l0() const { return to_metres(l0_nm); }
    friend bool operator==(const SegmentDrive&, const SegmentDrive&) = default;
};

struct SimState {
    std::shared_ptr<const SessionSettings> settings;

    std::vector<SegmentDrive> locked;  // base first
    SegmentDrive active;               // zero length right after a lock
    SegmentChain chain;                // derived from locked + active
    double body_pressure = 0.0;
    double lock_pressure = 0.0;
    double locked_arc_length = 0.0;
    double total_length = 0.0;

    std::vector<Command> event_log;  // accepted commands, in order
    std::uint64_t clock = 0;         // accepted command count

    const Environment& environment() const { return settings->environment; }
    const TendonState& active_tendons() const { return active.tendons; }

    friend bool operator==(const SimState& a, const SimState& b);
};

/// Equality of the physical configuration only (ignores log and clock).
bool same_configuration(const SimState& a, const SimState& b);

enum class Warning { growth_blocked, slip_predicted, collision, curvature_limit };

std::string_view to_string(Warning w);

struct StepResult {
    SimState state;
    std::vector<Warning> warnings;
    bool accepted = false;
    std::string error;  // set when the command was rejected as invalid
    ContactReport contact;

    bool has_warning(Warning w) const;
};

SimState initial_state(std::shared_ptr<const SessionSettings> settings);

/// Pure transition. A rejected command leaves the state unchanged.
StepResult apply(const SimState& state, const Command& command);

BodyPolyline body_polyline(const SimState& state);

/// Locking requirement of every locked segment at the current body pressure.
std::vector<LockingRequirement> locking_requirements(const SimState& state);

/// True when some locked segment needs more than the current lock pressure.
bool slip_predicted(const SimState& state);

struct ScriptRun {
    SimState final_state;
    std::vector<StepResult> trace;
};

/// Folds apply over `commands`. With strict set, the first rejection throws
/// InvalidCommand naming the step.
ScriptRun run_script(std::span<const Command> commands, std::shared_ptr<const SessionSettings> settings,
                     bool strict = false);

/// Re-applies a state's event log from the initial state.
SimState replay(const SimState& state);

}  // namespace vine
