#include "vine/protocol.hpp"

#include "vine/script.hpp"

#include <cmath>

namespace vine {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json envelope(const std::string& type, json payload) {
    return {{"v", kProtocolVersion}, {"type", type}, {"payload", std::move(payload)}};
}

double number_field(const json& payload, const char* key) {
    if (!payload.contains(key) || !payload.at(key).is_number())
        throw ProtocolError("bad_payload", std::string("payload field '") + key + "' must be a number");
    return payload.at(key).get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

json command_to_message(const Command& command) {
    return std::visit(
        overloaded{
            [](const cmd::Steer& c) { return envelope("cmd.steer", {{"dla", c.dla}, {"dlb", c.dlb}}); },
            [](const cmd::Grow& c) {
                json p = {{"length", c.length}};
                if (c.body_pressure) p["body_pressure"] = *c.body_pressure;
                return envelope("cmd.grow", p);
            },
            [](const cmd::Lock&) { return envelope("cmd.lock", json::object()); },
            [](const cmd::Unlock&) { return envelope("cmd.unlock", json::object()); },
            [](const cmd::Retract& c) { return envelope("cmd.retract", {{"length", c.length}}); },
            [](const cmd::SetPressure& c) {
                return envelope("cmd.set_pressure",
                                {{"target", c.target == cmd::PressureTarget::body ? "body" : "lock"},
                                 {"pressure", c.pressure}});
            },
            [](const cmd::Reset&) { return envelope("cmd.reset", json::object()); },
        },
        command);
}

Command command_from_message(const json& m) {
    if (!m.is_object()) throw ProtocolError("bad_frame", "message must be a JSON object");
    if (!m.contains("v") || !m.at("v").is_number_integer())
        throw ProtocolError("bad_version", "message is missing integer field 'v'");
    if (m.at("v").get<int>() != kProtocolVersion)
        throw ProtocolError("bad_version", "unsupported protocol version " + m.at("v").dump());
    if (!m.contains("type") || !m.at("type").is_string())
        throw ProtocolError("bad_frame", "message is missing string field 'type'");
    const json payload = m.contains("payload") ? m.at("payload") : json::object();
    if (!payload.is_object()) throw ProtocolError("bad_payload", "payload must be an object");

    const std::string type = m.at("type").get<std::string>();
    if (type == "cmd.steer") return cmd::Steer{number_field(payload, "dla"), number_field(payload, "dlb")};
    if (type == "cmd.grow") {
        cmd::Grow g{number_field(payload, "length"), std::nullopt};
        if (payload.contains("body_pressure") && !payload.at("body_pressure").is_null())
            g.body_pressure = number_field(payload, "body_pressure");
        return g;
    }
    if (type == "cmd.lock") return cmd::Lock{};
    if (type == "cmd.unlock") return cmd::Unlock{};
    if (type == "cmd.retract") return cmd::Retract{number_field(payload, "length")};
    if (type == "cmd.set_pressure") {
        cmd::SetPressure sp;
        const std::string target = payload.value("target", std::string{});
        if (target == "body")
            sp.target = cmd::PressureTarget::body;
        else if (target == "lock")
            sp.target = cmd::PressureTarget::lock;
        else
            throw ProtocolError("bad_payload", "set_pressure target must be 'body' or 'lock'");
        sp.pressure = number_field(payload, "pressure");
        return sp;
    }
    if (type == "cmd.reset") return cmd::Reset{};
    throw ProtocolError("unknown_type", "unknown message type '" + type + "'");
}

Snapshot make_snapshot(const SimState& state) {
    const SessionSettings& s = *state.settings;
    Snapshot snap;
    snap.clock = state.clock;
    for (std::size_t i = 0; i < state.chain.segments.size(); ++i) {
        const ArcSegment& seg = state.chain.segments[i];
        ArcView a;
        a.theta = seg.theta;
        if (std::isfinite(seg.radius)) a.radius = seg.radius;
        a.mean_length = seg.mean_length;
        a.side_e = seg.side_e;
        a.side_i = seg.side_i;
        a.locked = i < state.chain.locked_count;
        snap.arcs.push_back(a);
    }
    snap.locked_count = state.chain.locked_count;
    const BodyPolyline body = body_polyline(state);
    snap.body = body.points;
    snap.body_radius = body.body_radius;
    snap.tip = forward_kinematics(state.chain);
    snap.body_pressure = state.body_pressure;
    snap.lock_pressure = state.lock_pressure;
    snap.growth_threshold = s.growth_threshold;
    snap.total_length = state.total_length;
    snap.locked_arc_length = state.locked_arc_length;
    snap.active_neutral_length = state.active.l0();
    snap.active_tendons = state.active.tendons;
    for (const LockingRequirement& req : locking_requirements(state)) {
        LockView v;
        if (std::isfinite(req.required_pressure)) v.required_pressure = req.required_pressure;
        v.curvature = req.curvature;
        v.feasible = req.feasible && req.required_pressure <= state.lock_pressure;
        snap.locking.push_back(v);
    }
    snap.environment = s.environment;
    return snap;
}

Snapshot make_snapshot(const StepResult& step) {
    Snapshot snap = make_snapshot(step.state);
    snap.accepted = step.accepted;
    snap.error = step.error;
    for (Warning w : step.warnings) snap.warnings.emplace_back(to_string(w));
    return snap;
}

json to_json(const Snapshot& s) {
    json arcs = json::array();
    for (const ArcView& a : s.arcs)
        arcs.push_back({{"theta", a.theta},
                        {"radius", optional_number(a.radius)},
                        {"mean_length", a.mean_length},
                        {"side_e", a.side_e},
                        {"side_i", a.side_i},
                        {"locked", a.locked}});
    json body = json::array();
    for (const Vec2& p : s.body) body.push_back({p.x(), p.y()});
    json locking = json::array();
    for (const LockView& l : s.locking)
        locking.push_back({{"required_pressure", optional_number(l.required_pressure)},
                           {"curvature", l.curvature},
                           {"feasible", l.feasible}});
    return {{"clock", s.clock},
            {"accepted", s.accepted},
            {"error", s.error},
            {"warnings", s.warnings},
            {"arcs", arcs},
            {"locked_count", s.locked_count},
            {"body", {{"points", body}, {"body_radius", s.body_radius}}},
            {"tip", {{"x", s.tip.x}, {"y", s.tip.y}, {"phi", s.tip.phi}}},
            {"pressures",
             {{"body", s.body_pressure}, {"lock", s.lock_pressure}, {"growth_threshold", s.growth_threshold}}},
            {"total_length", s.total_length},
            {"locked_arc_length", s.locked_arc_length},
            {"active",
             {{"neutral_length", s.active_neutral_length},
              {"dla", s.active_tendons.dla},
              {"dlb", s.active_tendons.dlb}}},
            {"locking", locking},
            {"environment", to_json(s.environment)}};
}

Snapshot snapshot_from_json(const json& j) {
    try {
        Snapshot s;
        s.clock = j.at("clock").get<std::uint64_t>();
        s.accepted = j.at("accepted").get<bool>();
        s.error = j.at("error").get<std::string>();
        s.warnings = j.at("warnings").get<std::vector<std::string>>();
        for (const json& a : j.at("arcs"))
            s.arcs.push_back({a.at("theta").get<double>(), read_optional(a, "radius"),
                              a.at("mean_length").get<double>(), a.at("side_e").get<double>(),
                              a.at("side_i").get<double>(), a.at("locked").get<bool>()});
        s.locked_count = j.at("locked_count").get<std::size_t>();
        for (const json& p : j.at("body").at("points")) s.body.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        s.body_radius = j.at("body").at("body_radius").get<double>();
        s.tip = {j.at("tip").at("x").get<double>(), j.at("tip").at("y").get<double>(),
                 j.at("tip").at("phi").get<double>()};
        s.body_pressure = j.at("pressures").at("body").get<double>();
        s.lock_pressure = j.at("pressures").at("lock").get<double>();
        s.growth_threshold = j.at("pressures").at("growth_threshold").get<double>();
        s.total_length = j.at("total_length").get<double>();
        s.locked_arc_length = j.at("locked_arc_length").get<double>();
        s.active_neutral_length = j.at("active").at("neutral_length").get<double>();
        s.active_tendons = {j.at("active").at("dla").get<double>(), j.at("active").at("dlb").get<double>()};
        for (const json& l : j.at("locking"))
            s.locking.push_back({read_optional(l, "required_pressure"), l.at("curvature").get<double>(),
                                 l.at("feasible").get<bool>()});
        s.environment = environment_from_json(j.at("environment"));
        return s;
    } catch (const json::exception& e) {
        throw ProtocolError("bad_snapshot", e.what());
    } catch (const ConfigError& e) {
        throw ProtocolError("bad_snapshot", e.what());
    }
}

json snapshot_message(const Snapshot& snapshot) { return envelope("state.snapshot", to_json(snapshot)); }

json error_message(const std::string& code, const std::string& message) {
    return envelope("error", {{"code", code}, {"message", message}});
}

json trace_step(std::size_t index, const Command& command, const StepResult& step) {
    json warnings = json::array();
    for (Warning w : step.warnings) warnings.push_back(to_string(w));
    const Pose tip = forward_kinematics(step.state.chain);
    return {{"step", index},
            {"command", format_command(command)},
            {"accepted", step.accepted},
            {"error", step.error},
            {"warnings", warnings},
            {"segments", step.state.chain.segments.size()},
            {"locked_count", step.state.chain.locked_count},
            {"total_length", step.state.total_length},
            {"tip", {{"x", tip.x}, {"y", tip.y}, {"phi", tip.phi}}},
            {"pressures", {{"body", step.state.body_pressure}, {"lock", step.state.lock_pressure}}}};
}

}  // namespace vine
