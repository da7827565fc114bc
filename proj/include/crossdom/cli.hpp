#pragma once

#include <string>
#include <vector>

namespace crossdom {

// Entry point behind main(); exposed so tests can drive commands
// in-process. args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace crossdom
