#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qngc {

enum ExitCode : int {
    kExitOk = 0,
    kExitNotCertified = 1,
    kExitUsage = 2,
    kExitValidation = 3,
    kExitNoDepth = 4,
    kExitUnphysical = 5,
};

// Runs one CLI command. Artifacts without --out go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

// Grid specs: "log:lo:hi:per_sign" (symmetric, plus 0), "lin:lo:hi:count",
// or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

// "a..b" or "a,b,c".
std::vector<int> parse_orders(const std::string& spec);

}  // namespace qngc
