#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shillbid {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitInput = 2,
    kExitInvariant = 3,
};

/// Entry point of the `shillbid` command line tool. Subcommands: synth,
/// preprocess, features, stats, validate. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shillbid
