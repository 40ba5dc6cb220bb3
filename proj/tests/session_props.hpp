#pragma once

// Random command sequences for the session and the invariants they must keep.

#include "vine/session.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace props {

// Lengths come in 0.1 mm steps, like a UI slider would send.
inline double quantized(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng) * 1e-4;
}

inline vine::Command random_command(std::mt19937_64& rng) {
    using namespace vine;
    const int pick = std::uniform_int_distribution<int>(0, 99)(rng);
    if (pick < 25) return cmd::Grow{quantized(rng, 1, 600), std::nullopt};
    if (pick < 28) return cmd::Grow{quantized(rng, 1, 300), 40e3};
    if (pick < 45) {
        const int which = std::uniform_int_distribution<int>(0, 2)(rng);
        const double d = -quantized(rng, 0, 300);
        return which == 0 ? cmd::Steer{d, 0.0} : which == 1 ? cmd::Steer{0.0, d} : cmd::Steer{d, -quantized(rng, 0, 300)};
    }
    if (pick < 58) return cmd::Lock{};
    if (pick < 66) return cmd::Unlock{};
    if (pick < 80) return cmd::Retract{quantized(rng, 1, 800)};
    if (pick < 88) {
        static const double body[] = {20e3, 34.5e3, 40e3, 50e3};
        return cmd::SetPressure{cmd::PressureTarget::body, body[std::uniform_int_distribution<int>(0, 3)(rng)]};
    }
    if (pick < 97)
        return cmd::SetPressure{cmd::PressureTarget::lock, std::uniform_real_distribution<double>(0.0, 40e3)(rng)};
    return cmd::Reset{};
}

inline std::vector<vine::Command> random_sequence(std::mt19937_64& rng, int max_len = 30) {
    std::vector<vine::Command> out;
    out.push_back(vine::cmd::SetPressure{vine::cmd::PressureTarget::body, 40e3});
    const int n = std::uniform_int_distribution<int>(1, max_len)(rng);
    for (int i = 0; i < n; ++i) out.push_back(random_command(rng));
    return out;
}

struct Tally {
    long sequences = 0;
    long commands = 0;
    long accepted = 0;
    long inverse_checks = 0;
    std::vector<std::string> failures;

    void fail(long seq, std::size_t step, const std::string& what) {
        if (failures.size() < 20) {
            std::ostringstream s;
            s << "sequence " << seq << " step " << step << ": " << what;
            failures.push_back(s.str());
        }
    }
};

inline double neutral_total(const vine::SimState& st) {
    std::int64_t nm = st.active.l0_nm;
    for (const auto& d : st.locked) nm += d.l0_nm;
    return vine::to_metres(nm);
}

inline void check_sequence(const std::vector<vine::Command>& cmds,
                           const std::shared_ptr<const vine::SessionSettings>& settings, long seq, Tally& t) {
    using namespace vine;
    SimState st = initial_state(settings);
    double grown = 0.0;  // independent running ledger of neutral length
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        const Command& c = cmds[i];
        const StepResult step = vine::apply(st, c);
        ++t.commands;
        if (!step.accepted) {
            if (!(step.state == st)) t.fail(seq, i, "rejected command changed the state");
            continue;
        }
        ++t.accepted;
        const SimState& next = step.state;

        if (const auto* g = std::get_if<cmd::Grow>(&c)) grown += g->length;
        if (const auto* r = std::get_if<cmd::Retract>(&c)) grown -= r->length;
        if (std::holds_alternative<cmd::Reset>(c)) grown = 0.0;
        if (std::abs(neutral_total(next) - grown) > 1e-12) t.fail(seq, i, "neutral length not conserved");

        double arcs = 0.0;
        for (const ArcSegment& s : next.chain.segments) arcs += s.mean_length;
        if (std::abs(arcs - next.total_length) > 1e-12) t.fail(seq, i, "total length differs from arc sum");

        if (contact(body_polyline(next), next.environment(), settings->touch_tol).status ==
            ContactStatus::penetrating)
            t.fail(seq, i, "accepted state penetrates an obstacle");

        if (std::holds_alternative<cmd::Lock>(c)) {
            ++t.inverse_checks;
            const StepResult back = vine::apply(next, cmd::Unlock{});
            if (!back.accepted || !same_configuration(back.state, st)) t.fail(seq, i, "unlock did not undo lock");
        }
        // a pending steer is dropped by the re-lock, so only the clean case is an exact inverse
        if (std::holds_alternative<cmd::Unlock>(c) && st.active.tendons.dla == 0.0 && st.active.tendons.dlb == 0.0) {
            ++t.inverse_checks;
            const StepResult back = vine::apply(next, cmd::Lock{});
            if (!back.accepted || !same_configuration(back.state, st)) t.fail(seq, i, "lock did not undo unlock");
        }
        if (const auto* g = std::get_if<cmd::Grow>(&c); g && !g->body_pressure) {
            ++t.inverse_checks;
            const StepResult back = vine::apply(next, cmd::Retract{g->length});
            if (!back.accepted || !same_configuration(back.state, st)) t.fail(seq, i, "retract did not undo grow");
        }
        st = next;
    }
    if (!(replay(st) == st)) t.fail(seq, cmds.size(), "replay is not bit-identical");
    ++t.sequences;
}

}  // namespace props
