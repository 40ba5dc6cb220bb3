#include "vine/script.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vine {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

double parse_number(std::string_view word, std::size_t line) {
    double value = 0.0;
    // from_chars rejects a leading '+'
    if (!word.empty() && word.front() == '+') word.remove_prefix(1);
    const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || end != word.data() + word.size())
        throw ScriptError(line, "expected a number, got '" + std::string(word) + "'");
    return value;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ScriptError::ScriptError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Command parse_command(std::string_view line, std::size_t n) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) throw ScriptError(n, "empty command");

    const std::string_view verb = words[0];
    const auto expect_args = [&](std::size_t lo, std::size_t hi) {
        const std::size_t got = words.size() - 1;
        if (got < lo || got > hi)
            throw ScriptError(n, "'" + std::string(verb) + "' takes " + std::to_string(lo) +
                                     (lo == hi ? "" : "-" + std::to_string(hi)) + " argument(s)");
    };

    if (verb == "steer") {
        expect_args(2, 2);
        return cmd::Steer{parse_number(words[1], n), parse_number(words[2], n)};
    }
    if (verb == "grow") {
        expect_args(1, 2);
        cmd::Grow g{parse_number(words[1], n), std::nullopt};
        if (words.size() == 3) g.body_pressure = parse_number(words[2], n);
        return g;
    }
    if (verb == "lock") {
        expect_args(0, 0);
        return cmd::Lock{};
    }
    if (verb == "unlock") {
        expect_args(0, 0);
        return cmd::Unlock{};
    }
    if (verb == "retract") {
        expect_args(1, 1);
        return cmd::Retract{parse_number(words[1], n)};
    }
    if (verb == "set_pressure") {
        expect_args(2, 2);
        cmd::SetPressure sp;
        if (words[1] == "body")
            sp.target = cmd::PressureTarget::body;
        else if (words[1] == "lock")
            sp.target = cmd::PressureTarget::lock;
        else
            throw ScriptError(n, "set_pressure target must be 'body' or 'lock'");
        sp.pressure = parse_number(words[2], n);
        return sp;
    }
    if (verb == "reset") {
        expect_args(0, 0);
        return cmd::Reset{};
    }
    throw ScriptError(n, "unknown command '" + std::string(verb) + "'");
}

std::vector<Command> parse_script(std::string_view text) {
    std::vector<Command> commands;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        std::string_view body = line.substr(0, line.find('#'));
        if (split_words(body).empty()) continue;
        commands.push_back(parse_command(line, line_no));
    }
    return commands;
}

std::vector<Command> load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_script(text.str());
}

std::string format_command(const Command& command) {
    return std::visit(overloaded{
                          [](const cmd::Steer& c) { return "steer " + number(c.dla) + " " + number(c.dlb); },
                          [](const cmd::Grow& c) {
                              std::string s = "grow " + number(c.length);
                              if (c.body_pressure) s += " " + number(*c.body_pressure);
                              return s;
                          },
                          [](const cmd::Lock&) { return std::string("lock"); },
                          [](const cmd::Unlock&) { return std::string("unlock"); },
                          [](const cmd::Retract& c) { return "retract " + number(c.length); },
                          [](const cmd::SetPressure& c) {
                              return std::string("set_pressure ") +
                                     (c.target == cmd::PressureTarget::body ? "body " : "lock ") +
                                     number(c.pressure);
                          },
                          [](const cmd::Reset&) { return std::string("reset"); },
                      },
                      command);
}

std::string format_script(const std::vector<Command>& commands) {
    std::string out;
    for (const Command& c : commands) out += format_command(c) + "\n";
    return out;
}

}  // namespace vine
