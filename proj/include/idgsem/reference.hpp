#pragma once

#include <string>

#include "idgsem/physics.hpp"
#include "idgsem/types.hpp"

namespace idgsem {

/// Piecewise-constant profile on a fine uniform grid (cell centers).
struct FvProfile {
  double x_left = 0.0;
  double x_right = 1.0;
  vec x;
  vec u;

  double dx() const { return (x_right - x_left) / x.size(); }
  double eval(double xx) const;
};

/// Exact solution of the two sine Burgers problems (catalog ids 1 and 3) by
/// characteristics; after breaking time the shock is inserted at x = 0.5
/// (problem 1, stationary by odd symmetry) or x = 0.5 + t (problem 3, which
/// is problem 1 shifted to a unit-speed frame).
double burgers_characteristics(const Problem& p, double x, double t);

/// Entropy solution of the Riemann problem, sampled at xi = x/t (Osher's
/// minimax form, which realizes the convex/concave envelope construction).
double riemann_selfsim(const Problem& p, double uL, double uR, double xi);

/// First-order Godunov finite-volume march at CFL 0.45 on n_cells cells up
/// to time t; the brute-force arbiter. With steady = true the march stops
/// once the update freezes (bitwise), t acting as a cap. Asserts the
/// maximum principle along the way.
FvProfile fv_oracle(const Problem& p, int n_cells, double t, bool steady = false);

/// Analytic evaluator for catalog problems 1-4. Problem 5's Riemann fan
/// leaves the domain before the final time, so only the finite-volume
/// oracle serves as its reference.
bool has_exact_solution(const Problem& p);
double exact_solution(const Problem& p, double x, double t);

}  // namespace idgsem
