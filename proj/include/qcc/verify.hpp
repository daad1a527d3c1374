// The verification suite: one check per headline property of the
// toolkit, each pinning its own tolerances and runtime budget. The
// acceptance runner and the CLI `verify` command both drive these.

#pragma once

#include <string>
#include <vector>

namespace qcc {

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = false;
  std::string details;  // deterministic measured-vs-required summary
  double seconds = 0;
};

/// Suite names accepted by run_verification.
const std::vector<std::string>& verification_suites();

/// Runs a suite: "attack", "capacity", "classical", "chi", or "all".
/// jobs parallelizes independent sweeps inside checks that allow it
/// (results are identical for any job count). Throws
/// std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_verification(const std::string& suite, int jobs = 1);

/// Fixed-precision float formatting shared by reports (12 significant
/// digits).
std::string format_double(double v);

}  // namespace qcc
