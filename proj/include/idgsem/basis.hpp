#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "idgsem/types.hpp"

namespace idgsem {

/// Value and first derivative of the Legendre polynomial P_n at x,
/// normalized so that P_n(1) = 1.
template <class Scalar>
std::pair<Scalar, Scalar> legendre_eval(int n, Scalar x) {
  if (n == 0) return {Scalar(1), Scalar(0)};
  Scalar pm1 = Scalar(1);  // P_0
  Scalar p = x;            // P_1
  for (int k = 2; k <= n; ++k) {
    Scalar pk = (Scalar(2 * k - 1) * x * p - Scalar(k - 1) * pm1) / Scalar(k);
    pm1 = p;
    p = pk;
  }
  // P_n'(x) = n (P_{n-1} - x P_n) / (1 - x^2), with endpoint limit n(n+1)/2 * P_n.
  Scalar dp;
  if (std::abs(Scalar(1) - x * x) < Scalar(1e-30)) {
    dp = Scalar(n) * Scalar(n + 1) / Scalar(2) * p * (x > Scalar(0) ? Scalar(1) : (n % 2 == 0 ? Scalar(-1) : Scalar(1)));
  } else {
    dp = Scalar(n) * (pm1 - x * p) / (Scalar(1) - x * x);
  }
  return {p, dp};
}

/// Gauss-Lobatto collocation data for one polynomial degree: nodes, weights,
/// the nodal derivative matrix D, Q = diag(w) D, and the discrete Legendre
/// analysis map. Immutable after construction.
template <class Scalar>
struct LobattoBasis {
  int degree = 0;
  vec_t<Scalar> nodes;                 // xi_0 = -1 < ... < xi_p = 1
  vec_t<Scalar> weights;               // positive, sum to 2
  mat_t<Scalar> deriv;                 // D_kl = l_l'(xi_k)
  mat_t<Scalar> qmat;                  // Q_kl = w_k D_kl, satisfies SBP
  mat_t<Scalar> legendre_vandermonde;  // nodal values -> Legendre modal coefficients
  vec_t<Scalar> modal_norms;           // discrete norms of P_n: 2/(2n+1), top mode 2/p
  vec_t<Scalar> bary;                  // barycentric weights of the node set

  int size() const { return degree + 1; }
};

using Basis = LobattoBasis<double>;

template <class Scalar>
LobattoBasis<Scalar> build_basis(int p) {
  if (p < 1) throw std::invalid_argument("build_basis: degree must be >= 1");
  if (p > 12) throw std::invalid_argument("build_basis: degree must be <= 12");

  LobattoBasis<Scalar> b;
  b.degree = p;
  const int n = p + 1;
  b.nodes.resize(n);
  b.nodes(0) = Scalar(-1);
  b.nodes(p) = Scalar(1);

  // Interior nodes are the roots of P_p'. Newton from Chebyshev-Lobatto
  // guesses; the interlacing bracket is only used to catch a runaway step.
  const Scalar pi = Scalar(3.14159265358979323846L);
  for (int k = 1; k < p; ++k) {
    Scalar x = std::cos(pi * Scalar(k) / Scalar(p));
    const Scalar hi = std::cos(pi * (Scalar(k) - Scalar(0.5)) / Scalar(p));
    const Scalar lo = std::cos(pi * (Scalar(k) + Scalar(0.5)) / Scalar(p));
    for (int it = 0; it < 100; ++it) {
      auto [pv, dpv] = legendre_eval(p, x);
      // f = P_p', f' = P_p'' from the Legendre ODE.
      Scalar f = dpv;
      Scalar fp = (Scalar(2) * x * dpv - Scalar(p) * Scalar(p + 1) * pv) / (Scalar(1) - x * x);
      Scalar xn = x - f / fp;
      if (!(xn > lo && xn < hi)) xn = (lo + hi) / Scalar(2);
      Scalar dx = std::abs(xn - x);
      x = xn;
      if (dx < Scalar(1e-16)) break;
    }
    b.nodes(p - k) = x;  // cos ordering is descending
  }
  // Exact point symmetry of the node set.
  for (int k = 0; k <= p / 2; ++k) {
    Scalar s = (b.nodes(k) - b.nodes(p - k)) / Scalar(2);
    b.nodes(k) = s;
    b.nodes(p - k) = -s;
  }

  b.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    Scalar pv = legendre_eval(p, b.nodes(k)).first;
    b.weights(k) = Scalar(2) / (Scalar(p) * Scalar(p + 1) * pv * pv);
  }

  b.bary.resize(n);
  for (int k = 0; k < n; ++k) {
    Scalar w = Scalar(1);
    for (int j = 0; j < n; ++j)
      if (j != k) w *= b.nodes(k) - b.nodes(j);
    b.bary(k) = Scalar(1) / w;
  }

  b.deriv.resize(n, n);
  for (int k = 0; k < n; ++k) {
    Scalar rowsum = Scalar(0);
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      b.deriv(k, l) = (b.bary(l) / b.bary(k)) / (b.nodes(k) - b.nodes(l));
      rowsum += b.deriv(k, l);
    }
    b.deriv(k, k) = -rowsum;  // D annihilates constants exactly
  }
  b.qmat = b.weights.asDiagonal() * b.deriv;

  b.modal_norms.resize(n);
  for (int m = 0; m < n; ++m)
    b.modal_norms(m) = (m < p) ? Scalar(2) / Scalar(2 * m + 1) : Scalar(2) / Scalar(p);
  b.legendre_vandermonde.resize(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      b.legendre_vandermonde(m, k) =
          b.weights(k) * legendre_eval(m, b.nodes(k)).first / b.modal_norms(m);

  return b;
}

/// Barycentric evaluation of the interpolant of nodal data at xi in [-1,1].
template <class Scalar>
Scalar lagrange_eval(const LobattoBasis<Scalar>& b, const vec_t<Scalar>& nodal, Scalar xi) {
  const int n = b.size();
  for (int k = 0; k < n; ++k)
    if (xi == b.nodes(k)) return nodal(k);
  Scalar num = Scalar(0), den = Scalar(0);
  for (int k = 0; k < n; ++k) {
    Scalar t = b.bary(k) / (xi - b.nodes(k));
    num += t * nodal(k);
    den += t;
  }
  return num / den;
}

/// Legendre modal coefficients of nodal data under the Gauss-Lobatto
/// discrete L2 projection; exact for polynomial data of degree <= p.
template <class Scalar>
vec_t<Scalar> modal_coefficients(const LobattoBasis<Scalar>& b, const vec_t<Scalar>& nodal) {
  return b.legendre_vandermonde * nodal;
}

/// Gauss-Legendre rule on [-1,1] (open; used for the theta-integrals of the
/// two-point fluxes, never for the collocation itself).
struct GaussLegendre {
  vec nodes;
  vec weights;
};

const GaussLegendre& gauss_legendre(int n);

}  // namespace idgsem
