#pragma once

#include "vine/session.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vine {

class ScriptError : public std::runtime_error {
public:
    ScriptError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Line-oriented session script, one command per line, '#' starts a comment:
//
//   set_pressure body 40000
//   grow 0.10
//   steer 0 -0.010
//   lock
//   retract 0.02
//
// Lengths in metres, pressures in pascals.

Command parse_command(std::string_view line, std::size_t line_number = 1);
std::vector<Command> parse_script(std::string_view text);
std::vector<Command> load_script(const std::string& path);

/// One script line that parses back to an identical command.
std::string format_command(const Command& command);
std::string format_script(const std::vector<Command>& commands);

}  // namespace vine
