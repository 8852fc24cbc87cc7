#pragma once

#include "idgsem/basis.hpp"
#include "idgsem/types.hpp"

namespace idgsem {

/// Troubled-cell smoothness: base-10 log of the energy fraction carried by
/// the top Legendre mode, in the Gauss-Lobatto discrete L2 norm. Returns
/// the sentinel -300 when the cell has no top-mode energy.
double smoothness(const Basis& b, const Field& u, int c);

/// Activation threshold S_0 = -4 log10(2p).
double smoothness_threshold(int p);

/// Viscosity multiplier: 0 below the window, 1 above it, sine ramp inside.
double viscosity_multiplier(double s, double s0);

/// Per-cell multipliers evaluated from one time level; frozen during the
/// implicit solve of the following step.
vec troubled_cell_multipliers(const Basis& b, const Field& u);

}  // namespace idgsem
