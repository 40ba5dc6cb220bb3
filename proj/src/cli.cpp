#include "vine/cli.hpp"

#include "vine/config.hpp"
#include "vine/protocol.hpp"
#include "vine/script.hpp"
#include "vine/server.hpp"
#include "vine/workspace_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

namespace vine::cli {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct WorkspaceOptions {
    std::string mode = "onelock";
    bool free = false;
    std::optional<std::string> env;
    std::string out = "workspace";
    bool svg = false;
    std::optional<std::string> compare;
    bool json_summary = false;
    std::optional<double> max_length, kappa_limit, resolution;
    std::optional<int> curvature_steps, length_steps, lock_events;
};

struct FeasibilityOptions {
    std::optional<double> theta_deg, theta_rad;
    double body_pressure = 0.0;
    double lock_span = 0.02;
    std::optional<double> radius, offset, max_lock_pressure;
    bool json_out = false;
};

struct SimulateOptions {
    std::string script;
    std::optional<std::string> env;
    bool trace = false;
    bool strict = false;
};

struct ServeOptions {
    unsigned short port = 8765;
    std::string address = "127.0.0.1";
    std::optional<std::string> assets;
    std::optional<std::string> env;
};

int mode_events(const std::string& mode, const SweepSpec& spec) {
    return mode == "nolock" ? 0 : std::max(1, spec.lock_events);
}

json summary_json(const WorkspaceGrid& g) {
    const CoverageMetrics self = compare(g, g);
    return {{"mode", g.metadata.mode},
            {"cells", g.size()},
            {"configurations", g.metadata.configurations},
            {"singleton_fraction", self.singleton_fraction_a},
            {"mean_phi_span_deg", deg(self.mean_span_a)},
            {"max_phi_span_deg", deg(self.max_span_a)}};
}

void print_summary(const WorkspaceGrid& g, std::ostream& out) {
    const CoverageMetrics self = compare(g, g);
    out << "mode " << g.metadata.mode << "\n"
        << "cells " << g.size() << "\n"
        << "configurations " << g.metadata.configurations << "\n"
        << "singleton_fraction " << fixed(self.singleton_fraction_a, 6) << "\n"
        << "mean_phi_span_deg " << fixed(deg(self.mean_span_a), 3) << "\n"
        << "max_phi_span_deg " << fixed(deg(self.max_span_a), 3) << "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

int run_workspace(const Config& base, const WorkspaceOptions& o, std::ostream& out) {
    Config config = base;
    SweepSpec& spec = config.sweep;
    if (o.max_length) spec.max_length = *o.max_length;
    if (o.kappa_limit) spec.kappa_limit = *o.kappa_limit;
    if (o.resolution) spec.xy_resolution = *o.resolution;
    if (o.curvature_steps) spec.curvature_steps = *o.curvature_steps;
    if (o.length_steps) spec.length_steps = *o.length_steps;
    if (o.lock_events) spec.lock_events = *o.lock_events;
    spec.validate(config.robot);

    // everything that can fail on input is resolved before any file is written
    const Environment env = o.free ? Environment{} : load_environment(o.env.value_or(config.environment));
    env.validate();
    const Environment* env_ptr = env.empty() ? nullptr : &env;

    WorkspaceGrid grid = sweep(config.robot, spec, mode_events(o.mode, spec), env_ptr);
    std::optional<WorkspaceGrid> other;
    std::optional<CoverageMetrics> metrics;
    if (o.compare) {
        other = sweep(config.robot, spec, mode_events(*o.compare, spec), env_ptr);
        metrics = compare(*other, grid);
    }

    std::ostringstream csv;
    write_csv(grid, csv);
    json doc = to_json(grid);
    if (metrics) doc["compare"] = {{"baseline", other->metadata.mode}, {"metrics", to_json(*metrics)}};
    std::string svg;
    if (o.svg) {
        std::ostringstream s;
        write_svg(grid, env_ptr, s, other ? &*other : nullptr);
        svg = s.str();
    }

    write_file(o.out + ".csv", csv.str());
    write_file(o.out + ".json", doc.dump(1) + "\n");
    if (o.svg) write_file(o.out + ".svg", svg);

    if (o.json_summary) {
        json s = summary_json(grid);
        if (metrics) {
            s["compare"] = to_json(*metrics);
            s["compare"]["baseline"] = other->metadata.mode;
        }
        out << s.dump(2) << "\n";
        return 0;
    }
    print_summary(grid, out);
    if (metrics) {
        out << "compare_baseline " << other->metadata.mode << "\n"
            << "baseline_cells " << metrics->count_a << "\n"
            << "baseline_cells_contained " << metrics->a_in_b << "\n"
            << "containment " << fixed(metrics->containment, 6) << "\n"
            << "count_ratio " << fixed(metrics->count_ratio, 6) << "\n";
    }
    return 0;
}

int run_feasibility(const Config& config, const FeasibilityOptions& o, std::ostream& out) {
    if (o.theta_deg && o.theta_rad) throw std::invalid_argument("give --theta-deg or --theta, not both");
    const double theta = o.theta_rad ? *o.theta_rad : o.theta_deg ? *o.theta_deg * std::numbers::pi / 180.0 : 0.0;
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (!std::isfinite(o.body_pressure) || o.body_pressure < 0.0)
        throw std::invalid_argument("body pressure must be >= 0");
    if (!std::isfinite(o.lock_span) || !(o.lock_span > 0.0)) throw std::invalid_argument("lock span must be > 0");

    WrinkleModel wrinkle = config.wrinkle;
    if (o.radius) wrinkle.effective_radius = *o.radius;
    if (o.offset) wrinkle.offset = *o.offset;
    if (!(wrinkle.effective_radius > 0.0) || !(wrinkle.offset >= 0.0))
        throw std::invalid_argument("radius must be > 0 and offset >= 0");
    wrinkle.pressure = o.body_pressure;
    const double max_p = o.max_lock_pressure.value_or(config.max_lock_pressure);

    const LockingRequirement req = required_locking_pressure(wrinkle, config.friction, theta, o.lock_span, max_p);
    const bool grows = growth_gate(o.body_pressure, config.growth_threshold);

    if (o.json_out) {
        json j = {{"theta_rad", theta},
                  {"body_pressure_pa", o.body_pressure},
                  {"lock_span_m", o.lock_span},
                  {"tension_n", req.tension},
                  {"curvature_per_m", req.curvature},
                  {"required_tension_per_length_n_per_m", req.required_tension_per_length},
                  {"required_lock_pressure_pa", std::isfinite(req.required_pressure) ? json(req.required_pressure)
                                                                                    : json(nullptr)},
                  {"max_lock_pressure_pa", max_p},
                  {"feasible", req.feasible},
                  {"growth_possible", grows}};
        if (!req.reason.empty()) j["reason"] = req.reason;
        out << j.dump(2) << "\n";
    } else {
        out << "theta_deg " << fixed(deg(theta), 4) << "\n"
            << "body_pressure_kpa " << fixed(o.body_pressure / 1e3, 4) << "\n"
            << "tension_N " << fixed(req.tension, 6) << "\n"
            << "curvature_1/m " << fixed(req.curvature, 6) << "\n"
            << "required_lock_pressure_kpa "
            << (std::isfinite(req.required_pressure) ? fixed(req.required_pressure / 1e3, 4) : "inf") << "\n"
            << "max_lock_pressure_kpa " << fixed(max_p / 1e3, 4) << "\n"
            << "feasible " << (req.feasible ? "yes" : "no") << "\n"
            << "growth_possible " << (grows ? "yes" : "no") << "\n";
        if (!req.reason.empty()) out << "reason " << req.reason << "\n";
    }
    return 0;
}

int run_simulate(const Config& config, const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    const std::vector<Command> commands = load_script(o.script);
    Environment env = load_environment(o.env.value_or(config.environment));
    env.validate();
    const auto settings = make_session_settings(config, std::move(env));

    ScriptRun run;
    try {
        run = run_script(commands, settings, o.strict);
    } catch (const InvalidCommand& e) {
        err << "vine simulate: " << e.what() << "\n";
        return 3;
    }
    if (o.trace) {
        for (std::size_t i = 0; i < run.trace.size(); ++i) out << trace_step(i, commands[i], run.trace[i]).dump() << "\n";
        return 0;
    }
    out << to_json(make_snapshot(run.final_state)).dump(2) << "\n";
    return 0;
}

int run_serve(const Config& config, const ServeOptions& o, std::ostream& out) {
    Environment env = load_environment(o.env.value_or(config.environment));
    env.validate();
    std::string assets = o.assets.value_or("");
    if (!o.assets && std::filesystem::is_directory("console/dist")) assets = "console/dist";
    Server server(make_session_settings(config, std::move(env)), assets, o.port, o.address);
    out << "vine serve: listening on http://" << o.address << ":" << server.port() << "/" << std::endl;
    server.run();
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Planar simulator for a shape-locking vine robot", "vine"};
    app.require_subcommand(1);
    std::optional<std::string> config_path;
    app.add_option("--config", config_path, std::string("JSON config file (default: $") + kConfigEnvVar + ")");

    WorkspaceOptions ws;
    auto* workspace = app.add_subcommand("workspace", "Sweep reachable tip positions and approach angles");
    workspace->add_option("--mode", ws.mode, "Robot model")->check(CLI::IsMember({"nolock", "onelock"}));
    auto* free_flag = workspace->add_flag("--free", ws.free, "Ignore obstacles");
    workspace->add_option("--env", ws.env, "Environment preset or JSON file")->excludes(free_flag);
    workspace->add_option("--out", ws.out, "Output path prefix (writes PREFIX.csv, PREFIX.json)");
    workspace->add_flag("--svg", ws.svg, "Also write PREFIX.svg");
    workspace->add_option("--compare", ws.compare, "Baseline mode to compare against")
        ->check(CLI::IsMember({"nolock", "onelock"}));
    workspace->add_flag("--json", ws.json_summary, "Print the summary as JSON");
    workspace->add_option("--max-length", ws.max_length, "Total body length (m)");
    workspace->add_option("--kappa-limit", ws.kappa_limit, "Curvature bound (1/m)");
    workspace->add_option("--resolution", ws.resolution, "Cell size (m)");
    workspace->add_option("--curvature-steps", ws.curvature_steps, "Curvature samples");
    workspace->add_option("--length-steps", ws.length_steps, "Length samples");
    workspace->add_option("--lock-events", ws.lock_events, "Locks used by onelock mode");

    FeasibilityOptions fe;
    auto* feasibility = app.add_subcommand("feasibility", "Locking pressure needed to hold a bent segment");
    feasibility->add_option("--theta-deg", fe.theta_deg, "Segment bend angle (degrees)");
    feasibility->add_option("--theta", fe.theta_rad, "Segment bend angle (rad)");
    feasibility->add_option("--body-pressure", fe.body_pressure, "Body pressure (Pa)");
    feasibility->add_option("--lock-span", fe.lock_span, "Locked length of the segment (m)")
        ->capture_default_str();
    feasibility->add_option("--radius", fe.radius, "Effective wrinkle radius r (m)");
    feasibility->add_option("--offset", fe.offset, "Tension offset K (N)");
    feasibility->add_option("--max-lock-pressure", fe.max_lock_pressure, "Highest usable lock pressure (Pa)");
    feasibility->add_flag("--json", fe.json_out, "Machine-readable output");

    SimulateOptions si;
    auto* simulate = app.add_subcommand("simulate", "Run a command script through a session");
    simulate->add_option("script", si.script, "Script file")->required();
    simulate->add_option("--env", si.env, "Environment preset or JSON file");
    simulate->add_flag("--trace", si.trace, "Print one JSON line per command");
    simulate->add_flag("--strict", si.strict, "Fail on the first rejected command");

    ServeOptions se;
    auto* serve = app.add_subcommand("serve", "Live session service (WebSocket + console assets)");
    serve->add_option("--port", se.port, "TCP port, 0 picks a free one")->capture_default_str();
    serve->add_option("--address", se.address, "Bind address")->capture_default_str();
    serve->add_option("--assets", se.assets, "Directory of console assets");
    serve->add_option("--env", se.env, "Environment preset or JSON file");

    std::vector<std::string> argv_store{"vine"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const Config config = resolve_config(config_path);
        if (*workspace) return run_workspace(config, ws, out);
        if (*feasibility) return run_feasibility(config, fe, out);
        if (*simulate) return run_simulate(config, si, out, err);
        if (*serve) return run_serve(config, se, out);
    } catch (const ScriptError& e) {
        err << "vine: script " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "vine: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace vine::cli
