// cli.hpp — command-line entry point (also callable from tests)

#pragma once

namespace qtm {

// Exit codes: 0 success, 1 domain/validation error, 2 numerical-check failure.
int run_cli(int argc, const char* const* argv);

} // namespace qtm
