#include "idgsem/adapt.hpp"

#include <cmath>

namespace idgsem {

double smoothness(const Basis& b, const Field& u, int c) {
  const int p = b.degree;
  vec coeffs = b.legendre_vandermonde * u.row(c).transpose();
  double total = 0.0;
  for (int m = 0; m <= p; ++m) total += b.modal_norms(m) * coeffs(m) * coeffs(m);
  double top = b.modal_norms(p) * coeffs(p) * coeffs(p);
  if (top == 0.0 || total == 0.0) return -300.0;
  return std::log10(top / total);
}

double smoothness_threshold(int p) { return -4.0 * std::log10(2.0 * p); }

double viscosity_multiplier(double s, double s0) {
  if (s < s0 - 0.1) return 0.0;
  if (s > s0 + 0.1) return 1.0;
  return 0.5 + 0.5 * std::sin(5.0 * 3.14159265358979323846 * (s - s0));
}

vec troubled_cell_multipliers(const Basis& b, const Field& u) {
  const double s0 = smoothness_threshold(b.degree);
  vec m(u.rows());
  for (int c = 0; c < u.rows(); ++c) m(c) = viscosity_multiplier(smoothness(b, u, c), s0);
  return m;
}

}  // namespace idgsem
