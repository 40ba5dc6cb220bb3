#include "vine/session.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace vine {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Outcome of an attempted transition before bookkeeping.
struct Rejection {
    std::string error;
    std::optional<Warning> warning;
};

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

ArcSegment arc_for(const SegmentDrive& d, const SessionSettings& s) {
    return arc_from_tendons(d.l0(), d.tendons, s.robot.body_radius, s.robot.min_side_fraction);
}

// Rebuilds chain and lengths; throws ConstraintViolation for an infeasible drive.
void rebuild(SimState& st) {
    const SessionSettings& s = *st.settings;
    st.chain.segments.clear();
    st.locked_arc_length = 0.0;
    for (const SegmentDrive& d : st.locked) {
        st.chain.segments.push_back(arc_for(d, s));
        st.locked_arc_length += st.chain.segments.back().mean_length;
    }
    st.chain.locked_count = st.locked.size();
    st.total_length = st.locked_arc_length;
    if (st.active.l0_nm > 0) {
        const ArcSegment seg = arc_for(st.active, s);
        if (std::abs(seg.curvature()) > s.robot.kappa_max() * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "active curvature " << std::abs(seg.curvature()) << " 1/m exceeds kappa_max "
                << s.robot.kappa_max() << " 1/m";
            throw ConstraintViolation(msg.str());
        }
        st.chain.segments.push_back(seg);
        st.total_length += seg.mean_length;
    }
}

void validate_pending_tendons(const TendonState& t, const RobotParams& robot) {
    if (!std::isfinite(t.dla) || !std::isfinite(t.dlb))
        throw InvalidCommand("tendon displacement must be finite");
    if (t.dla > 0.0 || t.dlb > 0.0) throw InvalidCommand("tendon displacement must be <= 0");
    if (robot.min_side_fraction >= 1.0 && (t.dla != 0.0 || t.dlb != 0.0))
        throw ConstraintViolation("min_side_fraction of 1 forbids any tendon contraction");
}

std::int64_t positive_length_nm(double length) {
    if (!std::isfinite(length) || !(length > 0.0)) throw InvalidCommand("length must be positive and finite");
    const std::int64_t nm = to_nanometres(length);
    if (nm <= 0) throw InvalidCommand("length below the 1 nm resolution");
    return nm;
}

}  // namespace

std::int64_t to_nanometres(double metres) { return std::llround(metres * 1e9); }

double to_metres(std::int64_t nanometres) { return static_cast<double>(nanometres) * 1e-9; }

std::string_view command_name(const Command& command) {
    return std::visit(overloaded{
                          [](const cmd::Steer&) { return std::string_view("steer"); },
                          [](const cmd::Grow&) { return std::string_view("grow"); },
                          [](const cmd::Lock&) { return std::string_view("lock"); },
                          [](const cmd::Unlock&) { return std::string_view("unlock"); },
                          [](const cmd::Retract&) { return std::string_view("retract"); },
                          [](const cmd::SetPressure&) { return std::string_view("set_pressure"); },
                          [](const cmd::Reset&) { return std::string_view("reset"); },
                      },
                      command);
}

std::string_view to_string(Warning w) {
    switch (w) {
        case Warning::growth_blocked: return "growth_blocked";
        case Warning::slip_predicted: return "slip_predicted";
        case Warning::collision: return "collision";
        case Warning::curvature_limit: return "curvature_limit";
    }
    return "unknown";
}

bool operator==(const SimState& a, const SimState& b) {
    return same_configuration(a, b) && a.event_log == b.event_log && a.clock == b.clock;
}

bool same_configuration(const SimState& a, const SimState& b) {
    return a.locked == b.locked && a.active == b.active && a.chain == b.chain &&
           a.body_pressure == b.body_pressure && a.lock_pressure == b.lock_pressure &&
           a.locked_arc_length == b.locked_arc_length && a.total_length == b.total_length;
}

bool StepResult::has_warning(Warning w) const {
    for (Warning x : warnings)
        if (x == w) return true;
    return false;
}

SimState initial_state(std::shared_ptr<const SessionSettings> settings) {
    if (!settings) throw std::invalid_argument("session settings are required");
    SimState st;
    st.settings = std::move(settings);
    st.body_pressure = st.settings->initial_body_pressure;
    st.lock_pressure = st.settings->initial_lock_pressure;
    rebuild(st);
    return st;
}

BodyPolyline body_polyline(const SimState& state) {
    return discretize(state.chain, state.settings->ds, state.settings->robot.body_radius);
}

std::vector<LockingRequirement> locking_requirements(const SimState& state) {
    const SessionSettings& s = *state.settings;
    WrinkleModel wrinkle = s.wrinkle;
    wrinkle.pressure = state.body_pressure;
    std::vector<LockingRequirement> out;
    for (std::size_t i = 0; i < state.chain.locked_count; ++i) {
        const ArcSegment& seg = state.chain.segments[i];
        out.push_back(required_locking_pressure(wrinkle, s.friction, seg.theta, seg.mean_length,
                                                s.max_lock_pressure));
    }
    return out;
}

bool slip_predicted(const SimState& state) {
    for (const LockingRequirement& req : locking_requirements(state))
        if (req.required_pressure > state.lock_pressure) return true;
    return false;
}

StepResult apply(const SimState& state, const Command& command) {
    const SessionSettings& s = *state.settings;
    SimState next = state;
    bool geometry_changed = false;
    std::optional<Rejection> rejection;

    try {
        std::visit(
            overloaded{
                [&](const cmd::Steer& c) {
                    next.active.tendons = {c.dla, c.dlb};
                    validate_pending_tendons(next.active.tendons, s.robot);
                    geometry_changed = true;
                },
                [&](const cmd::Grow& c) {
                    const std::int64_t nm = positive_length_nm(c.length);
                    const double pressure = c.body_pressure.value_or(state.body_pressure);
                    if (!finite_non_negative(pressure)) throw InvalidCommand("pressure must be >= 0");
                    if (!growth_gate(pressure, s.growth_threshold)) {
                        rejection = Rejection{{}, Warning::growth_blocked};
                        return;
                    }
                    next.body_pressure = pressure;
                    next.active.l0_nm += nm;
                    geometry_changed = true;
                },
                [&](const cmd::Lock&) {
                    if (state.active.l0_nm == 0) throw InvalidCommand("lock: active segment has zero length");
                    next.locked.push_back(state.active);
                    next.active = SegmentDrive{};
                },
                [&](const cmd::Unlock&) {
                    if (state.locked.empty()) throw InvalidCommand("unlock: no locked segment");
                    if (state.active.l0_nm != 0)
                        throw InvalidCommand("unlock: body has grown past the most recent lock");
                    next.active = state.locked.back();
                    next.locked.pop_back();
                },
                [&](const cmd::Retract& c) {
                    std::int64_t remaining = positive_length_nm(c.length);
                    std::int64_t available = state.active.l0_nm;
                    for (const SegmentDrive& d : state.locked) available += d.l0_nm;
                    if (remaining > available) throw InvalidCommand("retract: longer than the body");
                    while (remaining > next.active.l0_nm) {
                        remaining -= next.active.l0_nm;
                        next.active = next.locked.back();  // locking bodies retract tip-first
                        next.locked.pop_back();
                    }
                    next.active.l0_nm -= remaining;
                    geometry_changed = true;
                },
                [&](const cmd::SetPressure& c) {
                    if (!finite_non_negative(c.pressure)) throw InvalidCommand("pressure must be >= 0");
                    (c.target == cmd::PressureTarget::body ? next.body_pressure : next.lock_pressure) =
                        c.pressure;
                },
                [&](const cmd::Reset&) {
                    SimState fresh = initial_state(state.settings);
                    fresh.event_log = std::move(next.event_log);
                    fresh.clock = next.clock;
                    next = std::move(fresh);
                },
            },
            command);
        if (!rejection) rebuild(next);
    } catch (const InvalidCommand& e) {
        rejection = Rejection{e.what(), std::nullopt};
    } catch (const ConstraintViolation& e) {
        rejection = Rejection{e.what(), Warning::curvature_limit};
    }

    StepResult result;
    if (!rejection && geometry_changed) {
        result.contact = contact(body_polyline(next), s.environment, s.touch_tol);
        if (result.contact.status == ContactStatus::penetrating)
            rejection = Rejection{"body would penetrate obstacle '" + result.contact.obstacle_id + "'",
                                  Warning::collision};
    }

    if (rejection) {
        result.state = state;
        result.accepted = false;
        result.error = std::move(rejection->error);
        if (rejection->warning) result.warnings.push_back(*rejection->warning);
    } else {
        next.event_log.push_back(command);
        ++next.clock;
        result.state = std::move(next);
        result.accepted = true;
    }
    if (slip_predicted(result.state)) result.warnings.push_back(Warning::slip_predicted);
    return result;
}

ScriptRun run_script(std::span<const Command> commands, std::shared_ptr<const SessionSettings> settings,
                     bool strict) {
    ScriptRun run{initial_state(std::move(settings)), {}};
    run.trace.reserve(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i) {
        StepResult step = vine::apply(run.final_state, commands[i]);
        if (strict && !step.accepted) {
            std::ostringstream msg;
            msg << "step " << i + 1 << " (" << command_name(commands[i]) << ") rejected";
            if (!step.error.empty()) msg << ": " << step.error;
            throw InvalidCommand(msg.str());
        }
        run.final_state = step.state;
        run.trace.push_back(std::move(step));
    }
    return run;
}

SimState replay(const SimState& state) {
    return run_script(state.event_log, state.settings).final_state;
}

}  // namespace vine
