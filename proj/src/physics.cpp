#include "idgsem/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "idgsem/quadrature.hpp"

namespace idgsem {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) return m;
    double fm = f(m);
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

void scan_roots(const std::function<double(double)>& f, double lo, double hi, int n,
                std::vector<double>& out) {
  double prev = f(lo);
  double xprev = lo;
  for (int i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double fx = f(x);
    if (prev == 0.0) out.push_back(xprev);
    else if ((prev < 0.0) != (fx < 0.0)) out.push_back(bisect(f, xprev, x));
    xprev = x;
    prev = fx;
  }
}

// Burgers closed forms: mean of f = u^2/2 over a straight segment and its
// derivative in the first endpoint.
double burgers_segment_mean(double a, double b) { return (a * a + a * b + b * b) / 6.0; }
double burgers_segment_mean_d1(double a, double b) { return (2.0 * a + b) / 6.0; }

// Square-entropy fluxes q(u) = int_0^u w f'(w) dw for the Buckley-Leverett
// fluxes, by Hermite reduction of the rational integrand.
// Problem 4: f = u^2/(u^2 + (1-u)^2/2), q' = 4u^2(1-u)/s^2, s = 3u^2-2u+1.
double bl_half_entropy_flux(double u) {
  double s = 3.0 * u * u - 2.0 * u + 1.0;
  const double sqrt2 = std::sqrt(2.0);
  double val = (2.0 * u - 4.0) / (9.0 * s) - (2.0 / 9.0) * std::log(s) +
               (sqrt2 / 9.0) * std::atan((3.0 * u - 1.0) / sqrt2);
  double c0 = -4.0 / 9.0 + (sqrt2 / 9.0) * std::atan(-1.0 / sqrt2);
  return val - c0;
}

// Problem 5: f = u^2/(u^2 + (1-u)^2/4), q' = 8u^2(1-u)/s^2, s = 5u^2-2u+1.
double bl_quarter_entropy_flux(double u) {
  double s = 5.0 * u * u - 2.0 * u + 1.0;
  double val = -(4.0 * u + 8.0) / (25.0 * s) - (4.0 / 25.0) * std::log(s) +
               (6.0 / 25.0) * std::atan((5.0 * u - 1.0) / 2.0);
  double c0 = -8.0 / 25.0 + (6.0 / 25.0) * std::atan(-0.5);
  return val - c0;
}

}  // namespace

void cache_critical_points(Problem& p, double lo, double hi) {
  p.flux_extrema.clear();
  p.speed_extrema.clear();
  scan_roots(p.flux_deriv, lo, hi, 8192, p.flux_extrema);
  // Stationary points of f' located on a central difference of f'.
  const double h = 1e-6 * std::max(1.0, std::abs(hi - lo));
  auto d2 = [&](double u) { return p.flux_deriv(u + h) - p.flux_deriv(u - h); };
  scan_roots(d2, lo, hi, 8192, p.speed_extrema);
}

Problem make_problem(int id) {
  Problem p;
  p.id = id;
  switch (id) {
    case 1:
      p.name = "burgers-sine";
      p.flux = [](double u) { return 0.5 * u * u; };
      p.flux_deriv = [](double u) { return u; };
      p.initial = [](double x) { return std::sin(2.0 * kPi * x); };
      p.bc.kind = BoundaryCondition::Kind::periodic;
      p.lower = -1.0;
      p.upper = 1.0;
      p.final_time = 0.4;
      break;
    case 2:
      p.name = "burgers-steady";
      p.flux = [](double u) { return 0.5 * u * u; };
      p.flux_deriv = [](double u) { return u; };
      p.initial = [](double x) { return 1.0 - 2.0 * x; };
      p.bc.kind = BoundaryCondition::Kind::dirichlet;
      p.bc.left = 1.0;
      p.bc.right = -1.0;
      p.lower = -1.0;
      p.upper = 1.0;
      p.steady = true;
      p.final_time = 0.0;
      break;
    case 3:
      p.name = "burgers-shifted-sine";
      p.flux = [](double u) { return 0.5 * u * u; };
      p.flux_deriv = [](double u) { return u; };
      p.initial = [](double x) { return 1.0 + std::sin(2.0 * kPi * x); };
      p.bc.kind = BoundaryCondition::Kind::periodic;
      p.lower = 0.0;
      p.upper = 2.0;
      p.final_time = 3.0 / (4.0 * kPi);
      break;
    case 4:
      p.name = "buckley-leverett-half";
      p.flux = [](double u) {
        double d = 1.0 - u;
        return u * u / (u * u + 0.5 * d * d);
      };
      p.flux_deriv = [](double u) {
        double g = u * u + 0.5 * (1.0 - u) * (1.0 - u);
        return u * (1.0 - u) / (g * g);
      };
      p.initial = [](double x) { return x < 0.5 ? 1.0 : 0.0; };
      p.bc.kind = BoundaryCondition::Kind::dirichlet;
      p.bc.left = 1.0;
      p.bc.right = 0.0;
      p.lower = 0.0;
      p.upper = 1.0;
      p.final_time = 0.2;
      p.square_entropy_flux = bl_half_entropy_flux;
      break;
    case 5:
      p.name = "buckley-leverett-quarter";
      p.flux = [](double u) {
        double d = 1.0 - u;
        return u * u / (u * u + 0.25 * d * d);
      };
      p.flux_deriv = [](double u) {
        double g = u * u + 0.25 * (1.0 - u) * (1.0 - u);
        return 0.5 * u * (1.0 - u) / (g * g);
      };
      p.initial = [](double x) { return x > 0.5 ? 3.0 : (x < 0.5 ? -3.0 : 0.0); };
      p.bc.kind = BoundaryCondition::Kind::dirichlet;
      p.bc.left = -3.0;
      p.bc.right = 3.0;
      p.lower = -3.0;
      p.upper = 3.0;
      p.final_time = 1.0;
      p.square_entropy_flux = bl_quarter_entropy_flux;
      break;
    default:
      throw std::invalid_argument("make_problem: id must be in 1..5");
  }
  if (id <= 3) {
    p.flux_segment_mean = burgers_segment_mean;
    p.flux_segment_mean_d1 = burgers_segment_mean_d1;
    p.square_entropy_flux = [](double u) { return u * u * u / 3.0; };
  }
  cache_critical_points(p);
  return p;
}

double lipschitz_constant(const Problem& p, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("lipschitz_constant: lo > hi");
  double m = std::max(std::abs(p.flux_deriv(lo)), std::abs(p.flux_deriv(hi)));
  const int n = 4096;
  for (int i = 1; i < n; ++i)
    m = std::max(m, std::abs(p.flux_deriv(lo + (hi - lo) * i / n)));
  for (double c : p.speed_extrema)
    if (c > lo && c < hi) m = std::max(m, std::abs(p.flux_deriv(c)));
  for (double c : p.flux_extrema)
    if (c > lo && c < hi) m = std::max(m, std::abs(p.flux_deriv(c)));
  return 1.01 * m;
}

double max_wave_speed(const Problem& p, double lo, double hi) {
  double m = std::max(std::abs(p.flux_deriv(lo)), std::abs(p.flux_deriv(hi)));
  for (double c : p.speed_extrema)
    if (c > lo && c < hi) m = std::max(m, std::abs(p.flux_deriv(c)));
  return m;
}

EntropyPair square_entropy(const Problem& p) {
  EntropyPair e;
  e.kind = EntropyPair::Kind::square;
  e.eta = [](double u) { return 0.5 * u * u; };
  e.eta_deriv = [](double u) { return u; };
  if (p.square_entropy_flux) {
    e.qflux = p.square_entropy_flux;
  } else {
    auto fd = p.flux_deriv;
    e.qflux = [fd](double u) {
      return segment_integral([&](double w) { return w * fd(w); }, 0.0, u);
    };
  }
  return e;
}

EntropyPair kruzkov_entropy(double K, const Problem& p) {
  EntropyPair e;
  e.kind = EntropyPair::Kind::kruzkov;
  e.kruzkov_K = K;
  e.eta = [K](double u) { return std::abs(u - K); };
  e.eta_deriv = [K](double u) { return u > K ? 1.0 : (u < K ? -1.0 : 0.0); };
  auto f = p.flux;
  e.qflux = [K, f](double u) {
    double s = u > K ? 1.0 : (u < K ? -1.0 : 0.0);
    return s * (f(u) - f(K));
  };
  return e;
}

}  // namespace idgsem
