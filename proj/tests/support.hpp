#pragma once

#include <random>

#include "idgsem/scheme.hpp"

namespace idgsem::testing {

/// Manufactured linear advection u_t + u_x = 0, for the dense-oracle tests;
/// not part of the catalog.
inline Problem linear_advection() {
  Problem p;
  p.id = 0;
  p.name = "linear-advection";
  p.flux = [](double u) { return u; };
  p.flux_deriv = [](double) { return 1.0; };
  p.initial = [](double x) { return std::sin(2.0 * 3.14159265358979323846 * x); };
  p.bc.kind = BoundaryCondition::Kind::periodic;
  p.lower = -1.0;
  p.upper = 1.0;
  p.final_time = 1.0;
  p.flux_segment_mean = [](double a, double b) { return 0.5 * (a + b); };
  p.flux_segment_mean_d1 = [](double, double) { return 0.5; };
  p.square_entropy_flux = [](double u) { return 0.5 * u * u; };
  return p;
}

inline Field random_field(int cells, int nodes, double lo, double hi, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Field f(cells, nodes);
  for (int c = 0; c < cells; ++c)
    for (int i = 0; i < nodes; ++i) f(c, i) = unif(rng);
  return f;
}

/// Dense matrix of the linear-advection space residual (periodic), built
/// from first principles: central volume coupling through Q plus upwind
/// face terms. Independent of space_residual's assembly path.
inline mat advection_residual_matrix(const Grid1D& g, const Basis& b) {
  const int n = b.size();
  const int N = g.n_cells * n;
  mat L = mat::Zero(N, N);
  auto idx = [&](int c, int i) { return c * n + i; };
  for (int c = 0; c < g.n_cells; ++c) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) L(idx(c, i), idx(c, k)) += b.qmat(i, k);
    // upwind: outflow face adds nothing, inflow face couples to the left
    int cl = (c + g.n_cells - 1) % g.n_cells;
    L(idx(c, 0), idx(c, 0)) += 1.0;
    L(idx(c, 0), idx(cl, n - 1)) -= 1.0;
  }
  return L;
}

inline vec flatten(const Field& f) {
  vec v(f.size());
  int k = 0;
  for (int c = 0; c < f.rows(); ++c)
    for (int i = 0; i < f.cols(); ++i) v(k++) = f(c, i);
  return v;
}

}  // namespace idgsem::testing
