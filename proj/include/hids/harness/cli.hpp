#pragma once

#include <iosfwd>

namespace hids::harness {

// Entry point of the `hids` command: run | gen | compare. Returns the process
// exit status; usage errors return 2, runtime failures 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hids::harness
