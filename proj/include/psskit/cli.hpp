#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace psskit {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitInput = 2, kExitInternal = 3 };

// args excludes the program name. Manifests named "-" are read from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// PSSKIT_SEED if set and numeric, else 1.
std::uint64_t default_seed();

}  // namespace psskit
