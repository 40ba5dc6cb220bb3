#pragma once

#include "vine/config.hpp"
#include "vine/session.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vine {

// Wire format for the live session: text frames carrying {"v", "type", "payload"}.
// Client -> server types: cmd.steer, cmd.grow, cmd.lock, cmd.unlock,
// cmd.retract, cmd.set_pressure, cmd.reset. Server -> client: state.snapshot, error.

constexpr int kProtocolVersion = 1;

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

json command_to_message(const Command& command);
Command command_from_message(const json& message);

struct ArcView {
    double theta = 0.0;
    std::optional<double> radius;  // absent when straight
    double mean_length = 0.0;
    double side_e = 0.0;
    double side_i = 0.0;
    bool locked = false;
};

struct LockView {
    std::optional<double> required_pressure;  // absent when no pressure suffices
    double curvature = 0.0;
    bool feasible = true;
};

/// Self-contained render state: everything needed to draw one frame.
struct Snapshot {
    std::uint64_t clock = 0;
    bool accepted = true;
    std::string error;
    std::vector<std::string> warnings;

    std::vector<ArcView> arcs;
    std::size_t locked_count = 0;
    std::vector<Vec2> body;
    double body_radius = 0.0;
    Pose tip;

    double body_pressure = 0.0;
    double lock_pressure = 0.0;
    double growth_threshold = 0.0;
    double total_length = 0.0;
    double locked_arc_length = 0.0;
    double active_neutral_length = 0.0;
    TendonState active_tendons;
    std::vector<LockView> locking;

    Environment environment;
};

Snapshot make_snapshot(const StepResult& step);
Snapshot make_snapshot(const SimState& state);

json to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const json& payload);

json snapshot_message(const Snapshot& snapshot);
json error_message(const std::string& code, const std::string& message);

/// One line of a simulation trace.
json trace_step(std::size_t index, const Command& command, const StepResult& step);

}  // namespace vine
