#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vmvt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFailed = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

// Parses argv (argv[0] is the program name) and runs one subcommand. Data goes
// to `out` unless --out names a file; diagnostics go to `err`.
int run(std::vector<std::string> const& argv, std::ostream& out, std::ostream& err);

// Oracle-equivalence checks behind `vmvt selftest`. Prints one
// "PASS name" / "FAIL name: detail" line per check; returns the failure count.
int run_selftest(std::ostream& out, unsigned workers);

}  // namespace vmvt::cli
