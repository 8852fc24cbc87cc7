#pragma once

#include <functional>
#include <string>
#include <vector>

#include "idgsem/types.hpp"

namespace idgsem {

struct BoundaryCondition {
  enum class Kind { periodic, dirichlet };
  Kind kind = Kind::periodic;
  double left = 0.0;   // prescribed exterior state at x = x_left
  double right = 0.0;  // prescribed exterior state at x = x_right
};

/// One scalar conservation law u_t + f(u)_x = 0 with initial/boundary data
/// and the essential bounds [lower, upper] of the data.
struct Problem {
  std::string name;
  int id = 0;  // 1..5 for the catalog problems, 0 for custom
  std::function<double(double)> flux;
  std::function<double(double)> flux_deriv;
  std::function<double(double)> initial;
  BoundaryCondition bc;
  double lower = 0.0;
  double upper = 0.0;
  double final_time = 0.0;
  bool steady = false;

  // Mean of f along the straight segment [a,b] and its derivative in a;
  // closed forms where available, otherwise left empty and evaluated by
  // quadrature (see twopoint).
  std::function<double(double, double)> flux_segment_mean;
  std::function<double(double, double)> flux_segment_mean_d1;

  // Closed form of q(u) = int_0^u w f'(w) dw when available.
  std::function<double(double)> square_entropy_flux;

  // Interior stationary points of f (roots of f') and of f' itself,
  // precomputed once over a wide scan range. The Godunov flux and the
  // wave-speed bounds reduce to lookups over these candidates.
  std::vector<double> flux_extrema;
  std::vector<double> speed_extrema;
};

/// The five catalog problems (flux, data, boundary treatment, final time).
Problem make_problem(int id);

/// Locates the stationary points of f and f' by dense scan plus bisection.
/// make_problem calls this; custom problems built by hand should too.
void cache_critical_points(Problem& p, double lo = -8.0, double hi = 8.0);

/// Upper bound for the Lipschitz constant of f on [lo, hi]: max |f'| over a
/// 4096-point grid, the endpoints, and the cached stationary points of f',
/// inflated by 1%. Never below the sampled maximum.
double lipschitz_constant(const Problem& p, double lo, double hi);

/// Sharp sup of |f'| on [lo, hi] via endpoints and cached stationary points
/// (no inflation). Used for the CFL rule and the viscosity coefficients.
double max_wave_speed(const Problem& p, double lo, double hi);

struct EntropyPair {
  enum class Kind { square, kruzkov, custom };
  Kind kind = Kind::custom;
  double kruzkov_K = 0.0;
  std::function<double(double)> eta;
  std::function<double(double)> eta_deriv;  // subderivative choice at kinks
  std::function<double(double)> qflux;      // q(u) = int^u eta'(w) f'(w) dw
};

EntropyPair square_entropy(const Problem& p);
EntropyPair kruzkov_entropy(double K, const Problem& p);

}  // namespace idgsem
