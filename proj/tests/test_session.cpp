#include "oracles.hpp"
#include "session_props.hpp"

#include "vine/script.hpp"
#include "vine/session.hpp"

#include <doctest.h>

#include <random>

using namespace vine;
using doctest::Approx;

namespace {

std::shared_ptr<const SessionSettings> settings_with(Environment env = {}) {
    auto s = std::make_shared<SessionSettings>();
    s->environment = std::move(env);
    return s;
}

SimState run(const std::shared_ptr<const SessionSettings>& s, std::vector<Command> cmds) {
    return run_script(cmds, s, true).final_state;
}

}  // namespace

TEST_SUITE("session") {
    TEST_CASE("reset state") {
        const SimState st = initial_state(settings_with());
        CHECK(st.chain.segments.empty());
        CHECK(st.total_length == 0.0);
        CHECK(forward_kinematics(st.chain).y == 0.0);
        CHECK(st.clock == 0);
    }

    TEST_CASE("steer bends the active segment") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1},
                                    cmd::Steer{0.0, -0.01}});
        REQUIRE(st.chain.segments.size() == 1);
        CHECK(st.chain.segments[0].theta == Approx(0.43478).epsilon(1e-5));
        CHECK(st.clock == 3);
    }

    TEST_CASE("growth gate") {
        const auto s = settings_with();
        const SimState st = initial_state(s);
        const StepResult blocked = vine::apply(st, cmd::Grow{0.05});
        CHECK_FALSE(blocked.accepted);
        CHECK(blocked.has_warning(Warning::growth_blocked));
        CHECK(blocked.error.empty());
        CHECK(blocked.state == st);

        const StepResult ok = vine::apply(st, cmd::Grow{0.05, 34.5e3});
        CHECK(ok.accepted);
        CHECK(ok.state.total_length == Approx(0.05));
        CHECK(ok.state.body_pressure == 34.5e3);
    }

    TEST_CASE("invalid commands are rejected without changing state") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1}});
        for (const Command& c : std::vector<Command>{cmd::Steer{0.01, 0.0}, cmd::Steer{0.0, -0.06}, cmd::Unlock{},
                                                    cmd::Retract{0.5}, cmd::Grow{-1.0},
                                                    cmd::SetPressure{cmd::PressureTarget::lock, -5.0}}) {
            const StepResult r = vine::apply(st, c);
            CHECK_FALSE(r.accepted);
            CHECK_FALSE(r.error.empty());
            CHECK(r.state == st);
        }
        CHECK(vine::apply(st, cmd::Steer{0.0, -0.06}).has_warning(Warning::curvature_limit));
        const SimState fresh = initial_state(s);
        CHECK_FALSE(vine::apply(fresh, cmd::Lock{}).accepted);
    }

    TEST_CASE("S-curve from steer, lock, opposite steer, grow") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1},
                                    cmd::Steer{0.0, -0.01}, cmd::Lock{}, cmd::Steer{-0.01, 0.0}, cmd::Grow{0.1}});
        REQUIRE(st.chain.segments.size() == 2);
        CHECK(st.chain.locked_count == 1);
        const double t1 = st.chain.segments[0].theta, t2 = st.chain.segments[1].theta;
        CHECK(t1 * t2 < 0.0);

        const double theta = 0.01 / 0.023, len = 0.095;
        const oracle::Tip a = oracle::arc_by_hand({}, theta / len, len);
        const oracle::Tip b = oracle::arc_by_hand(a, -theta / len, len);
        const Pose tip = forward_kinematics(st.chain);
        CHECK(std::hypot(tip.x - b.x, tip.y - b.y) < 1e-9);
        CHECK(std::abs(tip.phi - b.phi) < 1e-12);
    }

    TEST_CASE("lock, unlock and retract") {
        const auto s = settings_with();
        const SimState before = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1},
                                        cmd::Steer{0.0, -0.01}});
        const SimState locked = vine::apply(before, cmd::Lock{}).state;
        CHECK(locked.locked.size() == 1);
        CHECK(locked.active.l0_nm == 0);
        const SimState unlocked = vine::apply(locked, cmd::Unlock{}).state;
        CHECK(same_configuration(unlocked, before));

        const SimState grown = vine::apply(locked, cmd::Grow{0.05}).state;
        CHECK_FALSE(vine::apply(grown, cmd::Unlock{}).accepted);

        // retract consumes the active segment then the locked one
        const StepResult back = vine::apply(grown, cmd::Retract{0.08});
        REQUIRE(back.accepted);
        CHECK(back.state.locked.empty());
        CHECK(back.state.active.l0_nm == to_nanometres(0.07));
        CHECK(back.state.active.tendons.dlb == -0.01);
    }

    TEST_CASE("collision rejects the command") {
        const auto s = settings_with(preset("wall_gap"));
        SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.15}});
        // hard bend toward the wall at x = -0.1
        const StepResult r = vine::apply(st, cmd::Steer{-0.05, 0.0});
        CHECK_FALSE(r.accepted);
        CHECK(r.has_warning(Warning::collision));
        CHECK(r.state == st);
    }

    TEST_CASE("slip prediction follows lock pressure") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.02},
                                    cmd::Steer{0.0, -0.002}, cmd::Lock{}});
        CHECK(slip_predicted(st));
        const StepResult high = vine::apply(st, cmd::SetPressure{cmd::PressureTarget::lock, 34.5e3});
        const auto reqs = locking_requirements(high.state);
        REQUIRE(reqs.size() == 1);
        CHECK(high.has_warning(Warning::slip_predicted) == (reqs[0].required_pressure > 34.5e3));
    }

    TEST_CASE("exact grow and retract inverse") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1}});
        const SimState grown = vine::apply(st, cmd::Grow{0.0123456789}).state;
        const SimState back = vine::apply(grown, cmd::Retract{0.0123456789}).state;
        CHECK(same_configuration(back, st));
    }

    TEST_CASE("reset keeps the log") {
        const auto s = settings_with();
        const SimState st = run(s, {cmd::SetPressure{cmd::PressureTarget::body, 40e3}, cmd::Grow{0.1}, cmd::Reset{}});
        CHECK(same_configuration(st, initial_state(s)));
        CHECK(st.event_log.size() == 3);
        CHECK(replay(st) == st);
    }

    TEST_CASE("strict scripts name the failing step") {
        const auto s = settings_with();
        const std::vector<Command> cmds{cmd::Grow{0.1}};
        CHECK_THROWS_WITH_AS(run_script(cmds, s, true), doctest::Contains("step 1"), InvalidCommand);
        CHECK_NOTHROW(run_script(cmds, s, false));
        CHECK(same_configuration(run_script({}, s).final_state, initial_state(s)));
    }

    TEST_CASE("random sequences keep the invariants") {
        const auto s = settings_with(preset("wall_gap"));
        std::mt19937_64 rng(42);
        props::Tally t;
        for (long i = 0; i < 300; ++i) props::check_sequence(props::random_sequence(rng), s, i, t);
        for (const std::string& f : t.failures) FAIL_CHECK(f);
        CHECK(t.sequences == 300);
        CHECK(t.inverse_checks > 100);
    }
}
