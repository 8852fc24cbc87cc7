#pragma once

#include <string>
#include <vector>

#include "idgsem/solver.hpp"

namespace idgsem {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest violation observed (0 when vacuous)
  double seconds = 0.0;
  std::string note;
};

struct CheckContext {
  std::string data_dir;      // directory holding the golden reference CSVs
  std::string cli_path;      // CLI binary, for the determinism criterion
  bool corrupt_sbp = false;  // fault-injection hook exercised by tests
};

/// Named operator/flux/lemma sweeps (the `verify` subcommand surface).
/// `only` filters by substring; empty runs everything.
std::vector<CheckResult> property_checks(const CheckContext& ctx, const std::string& only = "");

/// Catalog runs of the five problems at their standard parameters with full viscosity, checked
/// for the maximum principle, entropy inequalities, and conservation.
std::vector<CheckResult> catalog_run_checks(const CheckContext& ctx, const std::string& only = "");

/// The acceptance gate: one aggregated result per criterion, in order.
std::vector<CheckResult> acceptance_criteria(const CheckContext& ctx);

}  // namespace idgsem
