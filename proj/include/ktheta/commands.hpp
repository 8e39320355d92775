#pragma once

#include <string>

#include "ktheta/json_io.hpp"

namespace ktheta {

struct CommandResult {
    Json output;
    int exit_code = 0;
};

// Dispatches one JSON job: kernel, build, check, decompose, clark, selftest.
// Throws ktheta::Error on invalid input or numerical failure.
CommandResult run_command(const std::string& name, const Json& config);

// String-level wrapper used by the CLI: parses the config, maps errors to the
// {"error": {kind, message}} envelope, and serializes the output compactly.
// The returned text is a pure function of (name, config_text).
struct TextResult {
    std::string output;
    int exit_code = 0;
};
TextResult run_command_text(const std::string& name, const std::string& config_text);

}  // namespace ktheta
