#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace difftree::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,     // bad arguments
  kData = 3,      // unreadable or invalid input
  kInternal = 4,
};

// Runs one subcommand: ingest, build-tree, metrics, bootstrap, synth,
// export-dot. args excludes the program name. Artifacts go to --out; the
// one-line summary goes to out, warnings and errors to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace difftree::cli
