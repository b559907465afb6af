#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smlsom
{

/// Exit codes: 0 ok, 1 usage, 2 data or model problem, 3 numerical failure.
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace smlsom
