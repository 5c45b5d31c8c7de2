#pragma once

#include <iosfwd>

namespace selfopt::harness {

// Entry point behind the selfopt executable; exposed here so the command
// surface is testable in-process. Exit codes: 0 success, 1 runtime failure,
// 2 usage/config errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selfopt::harness
