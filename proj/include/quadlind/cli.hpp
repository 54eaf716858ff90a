// cli.hpp — Batch front end: parse experiment configs, orchestrate the
// pipeline, emit machine-readable results.

#pragma once

#include <string>
#include <vector>

namespace quadlind::cli {

// Exit codes: 0 success, 2 config error, 3 physics error, 4 capability error
// (degenerate / unsupported zero-mode path), 5 numerical failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace quadlind::cli
