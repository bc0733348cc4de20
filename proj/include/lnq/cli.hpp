#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lnq::cli {

/// Runs the command line with `args` (program name excluded). Data goes to
/// `out`, diagnostics to `err`. Returns the process exit code: 0 when the
/// requested output was fully produced.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace lnq::cli
