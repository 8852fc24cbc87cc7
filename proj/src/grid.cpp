#include "idgsem/grid.hpp"

#include <stdexcept>

namespace idgsem {

Grid1D make_grid(int n_cells, const Problem& p, double x_left, double x_right) {
  if (n_cells < 1) throw std::invalid_argument("make_grid: need at least 1 cell");
  if (!(x_right > x_left)) throw std::invalid_argument("make_grid: empty domain");
  Grid1D g;
  g.n_cells = n_cells;
  g.x_left = x_left;
  g.x_right = x_right;
  g.bc = p.bc;
  return g;
}

double node_position(const Grid1D& g, const Basis& b, int c, int i) {
  return g.x_left + g.dx() * (c + 0.5 * (1.0 + b.nodes(i)));
}

Field project_initial(const Grid1D& g, const Basis& b, const Problem& p) {
  Field f(g.n_cells, b.size());
  for (int c = 0; c < g.n_cells; ++c)
    for (int i = 0; i < b.size(); ++i) f(c, i) = p.initial(node_position(g, b, c, i));
  return f;
}

double cell_average(const Basis& b, const Field& f, int c) {
  return 0.5 * b.weights.dot(f.row(c).transpose());
}

double neighbor_trace(const Grid1D& g, const Field& f, int c, Side side) {
  const int p = static_cast<int>(f.cols()) - 1;
  const bool periodic = g.bc.kind == BoundaryCondition::Kind::periodic;
  if (side == Side::left) {
    if (c == 0) return periodic ? f(g.n_cells - 1, p) : g.bc.left;
    return f(c - 1, p);
  }
  if (c == g.n_cells - 1) return periodic ? f(0, 0) : g.bc.right;
  return f(c + 1, 0);
}

double total_mass(const Grid1D& g, const Basis& b, const Field& f) {
  double m = 0.0;
  for (int c = 0; c < g.n_cells; ++c) m += g.cell_measure() * cell_average(b, f, c);
  return m;
}

}  // namespace idgsem
