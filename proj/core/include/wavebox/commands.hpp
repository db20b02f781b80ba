#ifndef WAVEBOX_COMMANDS_HPP
#define WAVEBOX_COMMANDS_HPP

// Experiment dispatch: each command builds the model from a Config, runs the
// corresponding simulation/audit and writes its artifacts under output_dir.
// Exit codes: 0 all audits pass, 2 some audit failed; errors are thrown
// (the CLI maps them to exit 1).

#include <iosfwd>
#include <string>
#include <vector>

#include "wavebox/config.hpp"

namespace wavebox {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAuditFail = 2;

const std::vector<std::string>& command_names();

int run_command(const std::string& command, const Config& cfg, std::ostream& log);

}  // namespace wavebox

#endif
