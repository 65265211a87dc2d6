#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zaremba {

// Parses `args` (program name excluded), runs the selected subcommand and
// returns the exit status: 0 on success, 1 on usage or domain errors, 2 when a
// computed object fails one of its structural checks.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zaremba
