#pragma once

#include <cmath>
#include <functional>

#include "idgsem/basis.hpp"

namespace idgsem {

/// Composite Gauss-Legendre integral of f over [a, b] with npanels equal
/// panels of npts points each. Signed: a > b flips the sign.
template <class F>
double gl_panels(F&& f, double a, double b, int npts, int npanels) {
  const GaussLegendre& gl = gauss_legendre(npts);
  const double w = (b - a) / npanels;
  double total = 0.0;
  for (int pnl = 0; pnl < npanels; ++pnl) {
    const double mid = a + w * (pnl + 0.5);
    double s = 0.0;
    for (int k = 0; k < npts; ++k) s += gl.weights(k) * f(mid + 0.5 * w * gl.nodes(k));
    total += 0.5 * w * s;
  }
  return total;
}

inline int panels_for_span(double span) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.5)));
}

/// Integral of f over [a, b]; panel width capped at 1/2 so that the catalog
/// rational fluxes (complex poles at distance ~0.4) integrate to machine
/// precision.
inline double segment_integral(const std::function<double(double)>& f, double a, double b) {
  return gl_panels(f, a, b, 64, panels_for_span(b - a));
}

}  // namespace idgsem
