#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "idgsem/solver.hpp"

namespace idgsem {

struct CheckOutcome {
  bool pass = false;
  double worst = 0.0;  // largest violation (signed defect or drift)
};

/// Every DOF at every recorded level lies in [lo - tol, hi + tol].
CheckOutcome check_mpp(const RunReport& run, double lo, double hi, double tol = 1e-9);

/// Per-cell entropy inequality with the Godunov numerical entropy flux:
/// <eta>_new - <eta>_old + dt/|k| (Q_right - Q_left) <= tol * scale, where
/// scale tracks |eta| dt / dx so steady CFL=1000 runs stay meaningful.
CheckOutcome check_entropy_cells(const RunReport& run, const Problem& p, const EntropyPair& pair,
                                 double tol = 1e-9);

/// Same inequality with the EC interface entropy flux of the square pair
/// (the no-viscosity lemma form).
CheckOutcome check_entropy_cells_ec(const RunReport& run, const Problem& p, double tol = 1e-9);

/// Mass drift, boundary-corrected for Dirichlet runs using the scheme's own
/// interface flux values (Gauss-Lobatto weighted in time for space-time
/// runs).
CheckOutcome check_conservation(const RunReport& run, const Problem& p, double tol);

/// (L1, Linf) of the final field against a reference callable; L1 by
/// Gauss-Lobatto quadrature, Linf over the nodes.
std::pair<double, double> error_norms(const Grid1D& g, const Basis& b, const Field& u,
                                      const std::function<double(double)>& ref);

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double mass = 0.0;
  int solver_iters = 0;
  double entropy_defect_sq = 0.0;
  double entropy_defect_k0 = 0.0;
  double boundary_flux_integral = 0.0;
};

/// Pure function of the recorded run; two invocations agree bitwise.
std::vector<StepDiagnostics> step_diagnostics(const RunReport& run, const Problem& p);

}  // namespace idgsem
