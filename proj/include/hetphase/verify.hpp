#pragma once

#include <string>
#include <vector>

namespace hetphase {

/// Options for the self-verification suites. variance_perturbation shifts
/// the analytic outcome variance the Fock-moment suite compares against;
/// it exists so a test harness can confirm the suite actually detects a
/// broken variance law.
struct VerifyOptions {
  double variance_perturbation = 0.0;
};

/// Result of one verification suite. worst_ratio is the largest observed
/// error divided by that check's tolerance, so anything below 1 passes.
struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst_ratio = 0.0;
  std::string detail;
};

/// Run the four oracle suites: the Hermite-Laguerre identity, the
/// series-vs-closed density lattice, the Fock-space moment oracle, and the
/// normalization checks.
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts = {});

} // namespace hetphase
