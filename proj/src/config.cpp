#include "vine/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace vine {

namespace {

// Reads optional members and rejects unknown ones so typos surface.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("'" + name_ + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(name_ + "." + key + ": " + e.what());
        }
    }

    template <typename T>
    void get(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return;
        T value{};
        get(key, value);
        out = value;
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw ConfigError("unknown key '" + name_ + "." + key + "'");
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

Vec2 vec_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(what + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Bounds bounds_from_json(const json& j) {
    Section s(j, "bounds");
    Bounds b;
    if (const json* v = s.child("min")) b.min = vec_from_json(*v, "bounds.min");
    if (const json* v = s.child("max")) b.max = vec_from_json(*v, "bounds.max");
    s.finish();
    return b;
}

CurvatureDerating derating_from_json(const json& j) {
    Section s(j, "friction.derate");
    std::string type = "linear";
    s.get("type", type);
    if (type == "linear") {
        double beta = 0.02;
        s.get("beta", beta);
        s.finish();
        return CurvatureDerating::linear(beta);
    }
    if (type == "table") {
        std::vector<std::pair<double, double>> pts;
        const json* p = s.child("points");
        if (!p || !p->is_array()) throw ConfigError("derating table needs 'points'");
        for (const json& row : *p) {
            const Vec2 v = vec_from_json(row, "derating point");
            pts.emplace_back(v.x(), v.y());
        }
        s.finish();
        return CurvatureDerating::table(std::move(pts));
    }
    throw ConfigError("unknown derating type '" + type + "'");
}

json derating_to_json(const CurvatureDerating& d) {
    if (d.is_linear()) return {{"type", "linear"}, {"beta", d.beta()}};
    json pts = json::array();
    for (const auto& [k, f] : d.points()) pts.push_back({k, f});
    return {{"type", "table"}, {"points", pts}};
}

}  // namespace

void Config::validate() const {
    try {
        robot.validate();
        wrinkle.validate();
        friction.validate();
        sweep.validate(robot);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(max_lock_pressure >= 0.0)) throw ConfigError("locking.max_pressure must be >= 0");
    if (!(growth_threshold >= 0.0)) throw ConfigError("growth.threshold must be >= 0");
    if (!(initial_body_pressure >= 0.0) || !(initial_lock_pressure >= 0.0))
        throw ConfigError("initial pressures must be >= 0");
    if (!(touch_tolerance >= 0.0)) throw ConfigError("session.touch_tolerance must be >= 0");
    if (!(session_ds > 0.0)) throw ConfigError("session.ds must be positive");
}

Config config_from_json(const json& j) {
    Config c;
    Section root(j, "config");
    if (const json* r = root.child("robot")) {
        Section s(*r, "robot");
        s.get("body_radius", c.robot.body_radius);
        s.get("lock_body_radius", c.robot.lock_body_radius);
        s.get("segment_neutral_length", c.robot.segment_neutral_length);
        s.get("min_side_fraction", c.robot.min_side_fraction);
        s.get("kappa_max", c.robot.kappa_max_override);
        s.finish();
    }
    if (const json* w = root.child("wrinkle")) {
        Section s(*w, "wrinkle");
        s.get("effective_radius", c.wrinkle.effective_radius);
        s.get("offset", c.wrinkle.offset);
        s.finish();
    }
    if (const json* f = root.child("friction")) {
        Section s(*f, "friction");
        s.get("mu", c.friction.mu);
        s.get("adhesion", c.friction.adhesion);
        s.get("contact_width", c.friction.contact_width);
        if (const json* d = s.child("derate")) c.friction.derate = derating_from_json(*d);
        s.finish();
    }
    if (const json* l = root.child("locking")) {
        Section s(*l, "locking");
        s.get("max_pressure", c.max_lock_pressure);
        s.finish();
    }
    if (const json* g = root.child("growth")) {
        Section s(*g, "growth");
        s.get("threshold", c.growth_threshold);
        s.finish();
    }
    if (const json* se = root.child("session")) {
        Section s(*se, "session");
        s.get("initial_body_pressure", c.initial_body_pressure);
        s.get("initial_lock_pressure", c.initial_lock_pressure);
        s.get("touch_tolerance", c.touch_tolerance);
        s.get("ds", c.session_ds);
        s.finish();
    }
    if (const json* sw = root.child("sweep")) {
        Section s(*sw, "sweep");
        s.get("max_length", c.sweep.max_length);
        s.get("lock_events", c.sweep.lock_events);
        s.get("curvature_steps", c.sweep.curvature_steps);
        s.get("length_steps", c.sweep.length_steps);
        s.get("kappa_limit", c.sweep.kappa_limit);
        s.get("xy_resolution", c.sweep.xy_resolution);
        s.get("ds", c.sweep.ds);
        s.get("touch_tolerance", c.sweep.touch_tol);
        s.get("branch_cap", c.sweep.branch_cap);
        s.finish();
    }
    root.get("environment", c.environment);
    root.finish();
    c.validate();
    return c;
}

json to_json(const SweepSpec& spec) {
    return {{"max_length", spec.max_length},
            {"lock_events", spec.lock_events},
            {"curvature_steps", spec.curvature_steps},
            {"length_steps", spec.length_steps},
            {"kappa_limit", spec.kappa_limit ? json(*spec.kappa_limit) : json(nullptr)},
            {"xy_resolution", spec.xy_resolution},
            {"ds", spec.ds},
            {"touch_tolerance", spec.touch_tol},
            {"branch_cap", spec.branch_cap}};
}

json to_json(const Config& c) {
    return {
        {"robot",
         {{"body_radius", c.robot.body_radius},
          {"lock_body_radius", c.robot.lock_body_radius},
          {"segment_neutral_length", c.robot.segment_neutral_length},
          {"min_side_fraction", c.robot.min_side_fraction},
          {"kappa_max", c.robot.kappa_max_override ? json(*c.robot.kappa_max_override) : json(nullptr)}}},
        {"wrinkle", {{"effective_radius", c.wrinkle.effective_radius}, {"offset", c.wrinkle.offset}}},
        {"friction",
         {{"mu", c.friction.mu},
          {"adhesion", c.friction.adhesion},
          {"contact_width", c.friction.contact_width},
          {"derate", derating_to_json(c.friction.derate)}}},
        {"locking", {{"max_pressure", c.max_lock_pressure}}},
        {"growth", {{"threshold", c.growth_threshold}}},
        {"session",
         {{"initial_body_pressure", c.initial_body_pressure},
          {"initial_lock_pressure", c.initial_lock_pressure},
          {"touch_tolerance", c.touch_tolerance},
          {"ds", c.session_ds}}},
        {"sweep", to_json(c.sweep)},
        {"environment", c.environment},
    };
}

namespace {

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed ") + what + " '" + path + "': " + e.what());
    }
}

}  // namespace

Config load_config(const std::string& path) { return config_from_json(read_json_file(path, "config")); }

Config resolve_config(const std::optional<std::string>& path) {
    if (path) return load_config(*path);
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_config(env);
    return Config{};
}

json to_json(const Environment& env) {
    json obstacles = json::array();
    for (const Obstacle& ob : env.obstacles) {
        json pts = json::array();
        for (const Vec2& p : ob.polyline) pts.push_back(vec_to_json(p));
        obstacles.push_back({{"id", ob.id}, {"points", pts}, {"thickness", ob.thickness}});
    }
    return {{"bounds", {{"min", vec_to_json(env.bounds.min)}, {"max", vec_to_json(env.bounds.max)}}},
            {"obstacles", obstacles}};
}

Environment environment_from_json(const json& j) {
    Section s(j, "environment");
    Environment env;
    std::string preset_name;
    s.get("preset", preset_name);

    if (preset_name == "wall_gap") {
        WallGapPreset p;
        s.get("wall_x", p.wall_x);
        s.get("gap_center_y", p.gap_center_y);
        s.get("gap_height", p.gap_height);
        s.get("thickness", p.thickness);
        if (const json* b = s.child("bounds")) p.bounds = bounds_from_json(*b);
        s.finish();
        env = make_preset(p);
    } else if (preset_name == "horizontal_bar") {
        HorizontalBarPreset p;
        s.get("bar_y", p.bar_y);
        s.get("x_min", p.x_min);
        s.get("x_max", p.x_max);
        s.get("thickness", p.thickness);
        if (const json* b = s.child("bounds")) p.bounds = bounds_from_json(*b);
        s.finish();
        env = make_preset(p);
    } else if (preset_name.empty() || preset_name == "free") {
        if (const json* b = s.child("bounds")) env.bounds = bounds_from_json(*b);
        if (const json* obs = s.child("obstacles")) {
            if (!obs->is_array()) throw ConfigError("'obstacles' must be an array");
            for (const json& o : *obs) {
                Section os(o, "obstacle");
                Obstacle ob;
                os.get("id", ob.id);
                os.get("thickness", ob.thickness);
                const json* pts = os.child("points");
                if (!pts || !pts->is_array()) throw ConfigError("obstacle needs 'points'");
                for (const json& p : *pts) ob.polyline.push_back(vec_from_json(p, "obstacle point"));
                os.finish();
                env.obstacles.push_back(std::move(ob));
            }
        }
        s.finish();
    } else {
        throw ConfigError("unknown environment preset '" + preset_name + "'");
    }
    try {
        env.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return env;
}

Environment load_environment(const std::string& name_or_path) {
    if (is_preset_name(name_or_path)) return preset(name_or_path);
    return environment_from_json(read_json_file(name_or_path, "environment file"));
}

std::shared_ptr<const SessionSettings> make_session_settings(const Config& c, Environment env) {
    auto s = std::make_shared<SessionSettings>();
    s->robot = c.robot;
    s->wrinkle = c.wrinkle;
    s->friction = c.friction;
    s->max_lock_pressure = c.max_lock_pressure;
    s->growth_threshold = c.growth_threshold;
    s->touch_tol = c.touch_tolerance;
    s->ds = c.session_ds;
    s->initial_body_pressure = c.initial_body_pressure;
    s->initial_lock_pressure = c.initial_lock_pressure;
    s->environment = std::move(env);
    return s;
}

}  // namespace vine
