#pragma once

#include <iosfwd>

namespace cocyc {

// Parses one command line, dispatches to the library, and writes exactly one
// report (JSON by default, CSV on request) to `out` in a single write.
// Returns 0 on success, 2 when the request is well-formed but infeasible,
// 3 on malformed input, 4 on an internal failure (always a bug).  Wall time
// goes to standard error so reports stay byte-identical across reruns.
int run(int argc, const char* const* argv, std::ostream& out);

// Same, writing to standard output.
int run(int argc, const char* const* argv);

}  // namespace cocyc
