#pragma once

namespace cli {

// Runs the compact invariant suite; prints one PASS/FAIL line per check to
// stdout and returns the number of failures.
int run_verify(bool quick);

}  // namespace cli
