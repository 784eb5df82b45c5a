#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hplab::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs one command line (without the program name). Reports go to the
/// `--out` file when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace hplab::cli
