#pragma once

#include <string>

#include "nys/config.hpp"

namespace nys {

// Executes one CLI command against a fully assembled configuration. The
// command consumes its keys (filling defaults as it reads), runs, verifies
// that no unknown keys remain, and finally writes the resolved config echo
// into the output directory. Throws the library error types; the CLI maps
// them onto exit codes 2 (config), 3 (data), 4 (numerical) and 5 (io).
void dispatch_command(const std::string& name, Config& cfg);

// The commands the dispatcher understands.
const std::vector<std::string>& command_names();

}  // namespace nys
