#pragma once

#include "idgsem/basis.hpp"
#include "idgsem/physics.hpp"
#include "idgsem/types.hpp"

namespace idgsem {

/// Uniform 1D mesh. In one dimension the volume metric products J*grad(xi)
/// collapse to 1 and the face metrics to J_e = 1, n_e = +-1, so the only
/// geometric quantities left are the cell width and the Jacobian dx/2.
struct Grid1D {
  int n_cells = 0;
  double x_left = 0.0;
  double x_right = 1.0;
  BoundaryCondition bc;

  double dx() const { return (x_right - x_left) / n_cells; }
  double jacobian() const { return 0.5 * dx(); }   // J_kappa
  double cell_measure() const { return dx(); }     // |kappa|
};

Grid1D make_grid(int n_cells, const Problem& p, double x_left = 0.0, double x_right = 1.0);

/// Physical position of node i of cell c.
double node_position(const Grid1D& g, const Basis& b, int c, int i);

/// Collocation projection of the initial datum: U_c^i = u0(x_c^i).
Field project_initial(const Grid1D& g, const Basis& b, const Problem& p);

double cell_average(const Basis& b, const Field& f, int c);

enum class Side { left, right };

/// Exterior trace at a cell face: the neighboring endpoint value, wrapped
/// for periodic meshes, or the prescribed ghost state at a Dirichlet
/// boundary.
double neighbor_trace(const Grid1D& g, const Field& f, int c, Side side);

/// Total mass sum_c |kappa| <u>_c.
double total_mass(const Grid1D& g, const Basis& b, const Field& f);

}  // namespace idgsem
