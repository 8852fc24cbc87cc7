#pragma once

#include <functional>

#include "idgsem/physics.hpp"

namespace idgsem {

/// Strictly convex entropy pair (theta, g) defining the EC fluxes. The
/// catalog experiments all use the square entropy, for which every map is
/// the identity; generic pairs go through the theta-integrals.
struct EcEntropy {
  bool is_square = true;
  std::function<double(double)> theta;
  std::function<double(double)> v;       // theta'
  std::function<double(double)> u_of_v;  // inverse of v (strictly increasing)
};

EcEntropy square_ec();
EcEntropy custom_ec(std::function<double(double)> theta, std::function<double(double)> v,
                    std::function<double(double)> u_of_v);

enum class FluxKind { godunov, rusanov };

/// Entropy-conservative volume flux h_ec(a, b, n). Square entropy: the mean
/// of f along the straight segment (closed form for polynomial fluxes,
/// composite Gauss-Legendre otherwise).
double h_ec(const Problem& p, const EcEntropy& ec, double a, double b, double n);

struct FluxDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// h_ec(a, b, +1) with both partial derivatives, square entropy only (the
/// form the Newton solver linearizes).
FluxDerivs h_ec_with_derivs(const Problem& p, double a, double b);

/// EC time flux: convex average of the two states weighted by beta.
double u_ec(const EcEntropy& ec, double a, double b);
FluxDerivs u_ec_with_derivs(double a, double b);  // square entropy

/// beta(a, b) in (0, 1/2]; identically 1/4 for the square entropy.
double beta_coeff(const EcEntropy& ec, double a, double b);

/// Riemann-fan average of the EC flux; stays in [min(a,b), max(a,b)] for
/// alpha at or above the local Lipschitz bound.
double fan_average_U(const Problem& p, const EcEntropy& ec, double a, double b, double n,
                     double alpha);

/// Lax-type fan average of the exact Riemann solution.
double lax_average_W(const Problem& p, double a, double b, double n, double alpha);

/// theta-averaged entropy flux and entropy along the EC path (verification
/// quantities; 64-point rule with kink splitting for Kruzkov entropies).
double q_ec(const Problem& p, const EcEntropy& ec, const EntropyPair& pair, double a, double b,
            double n);
double eta_bar(const EcEntropy& ec, const EntropyPair& pair, double a, double b);

/// Godunov flux by the minimax formula over cached stationary points, and
/// the state realizing it (ties resolved toward the first argument).
double godunov_flux(const Problem& p, double a, double b, double n);
double godunov_state(const Problem& p, double a, double b, double n);

/// Rusanov flux with lambda = lipschitz_constant on [min(a,b), max(a,b)].
double rusanov_flux(const Problem& p, double a, double b, double n);

double interface_flux(const Problem& p, FluxKind kind, double a, double b, double n);

/// Numerical entropy flux companion Q(a, b, n); Godunov only.
double interface_entropy_flux(const Problem& p, FluxKind kind, const EntropyPair& pair, double a,
                              double b, double n);

/// Interface flux with generalized derivatives (active branch of the
/// minimax for Godunov, frozen lambda for Rusanov).
FluxDerivs interface_flux_with_derivs(const Problem& p, FluxKind kind, double a, double b,
                                      double n);

/// Entropy flux potential psi(u) = v(u) f(u) - g(u) of the EC pair.
double ec_potential(const Problem& p, const EcEntropy& ec, double u);

/// Time entropy potential psi_t(u) = v(u) u - theta(u).
double time_entropy_potential(const EcEntropy& ec, double u);

}  // namespace idgsem
