#pragma once

// The acceptance suite: every release gate as a self-contained check with a
// pinned tolerance. Run by the `dihedral check` subcommand and by the
// acceptance test binary.

#include <string>
#include <vector>

namespace dihedral::checks {

struct CheckOptions {
  bool quick = false;   // smaller sweeps; for interactive use only
  int quad_order = 64;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;   // worst observed value vs threshold
  double seconds = 0;
};

std::vector<CheckResult> run_acceptance(const CheckOptions& opt = {});

}  // namespace dihedral::checks
