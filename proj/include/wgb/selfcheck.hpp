// Deterministic internal consistency checks for the command-line `check`
// subcommand; prints one PASS/FAIL line per group.
#pragma once

#include <cstdint>
#include <iosfwd>

namespace wgb {

// Runs every check group with the given seed; returns the number of failed
// groups (0 means all passed).
int run_selfcheck(std::ostream &out, std::uint64_t seed);

}  // namespace wgb
