#include "idgsem/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace idgsem {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_unit(double x) {
  double y = x - std::floor(x);
  return (y == 1.0) ? 0.0 : y;
}

// Root of g(xi) = xi + t sin(2 pi xi) - x on [lo, hi] by bisection; the
// bracket is checked first.
double sine_char_root(double x, double t, double lo, double hi) {
  auto g = [&](double xi) { return xi + t * std::sin(2.0 * kPi * xi) - x; };
  double glo = g(lo), ghi = g(hi);
  if (glo > 0.0 || ghi < 0.0)
    throw std::runtime_error("burgers_characteristics: root not bracketed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (g(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Zero-mean sine Burgers solution on the periodic unit cell:
// u_t + (u^2/2)_x = 0, u0 = sin(2 pi x). The shock forms at t = 1/(2 pi)
// and stays at x = 1/2 by odd symmetry around it.
double sine_burgers(double x, double t) {
  x = wrap_unit(x);
  if (t <= 0.0) return std::sin(2.0 * kPi * x);
  const double t_break = 1.0 / (2.0 * kPi);
  if (t <= t_break) {
    double xi = sine_char_root(x, t, x - t - 1e-12, x + t + 1e-12);
    return std::sin(2.0 * kPi * xi);
  }
  if (x == 0.5) return 0.0;
  if (x > 0.5) return -sine_burgers(1.0 - x, t);
  if (x == 0.0) return 0.0;
  // Characteristic foot lies left of the crest of xi + t sin(2 pi xi).
  double xi_c = std::acos(-1.0 / (2.0 * kPi * t)) / (2.0 * kPi);
  double xi = sine_char_root(x, t, 0.0, xi_c);
  return std::sin(2.0 * kPi * xi);
}

// Static flux functors for the catalog problems; the finite-volume march is
// templated on them so the inner loop inlines.
struct BurgersFlux {
  double operator()(double u) const { return 0.5 * u * u; }
};
struct BlHalfFlux {
  double operator()(double u) const {
    double d = 1.0 - u;
    return u * u / (u * u + 0.5 * d * d);
  }
};
struct BlQuarterFlux {
  double operator()(double u) const {
    double d = 1.0 - u;
    return u * u / (u * u + 0.25 * d * d);
  }
};
struct AnyFlux {
  const std::function<double(double)>* f;
  double operator()(double u) const { return (*f)(u); }
};

struct MarchSetup {
  int n_cells = 0;
  double t = 0.0;
  double dt_cfl = 0.0;
  bool steady = false;
  bool periodic = false;
  double ghost_left = 0.0, ghost_right = 0.0;
  std::vector<double> ce, fce;  // interior extrema of f and their values
};

template <class FluxFn>
void fv_march(FluxFn flux, const MarchSetup& s, std::vector<double>& un) {
  const int n_cells = s.n_cells;
  const double dx = 1.0 / n_cells;
  std::vector<double> fv(n_cells), fx(n_cells + 1);
  const double fl_ghost = flux(s.ghost_left), fr_ghost = flux(s.ghost_right);
  const int ne = static_cast<int>(s.ce.size());

  auto god = [&](double a, double b, double fa, double fb) {
    if (a >= b) {
      double best = fa > fb ? fa : fb;
      for (int k = 0; k < ne; ++k)
        if (s.ce[k] > b && s.ce[k] < a && s.fce[k] > best) best = s.fce[k];
      return best;
    }
    double best = fa < fb ? fa : fb;
    for (int k = 0; k < ne; ++k)
      if (s.ce[k] > a && s.ce[k] < b && s.fce[k] < best) best = s.fce[k];
    return best;
  };

  double time = 0.0;
  while (time < s.t) {
    double dt = s.steady ? s.dt_cfl : std::min(s.dt_cfl, s.t - time);
    const double lam = dt / dx;

    for (int j = 0; j < n_cells; ++j) fv[j] = flux(un[j]);
    for (int j = 1; j < n_cells; ++j) fx[j] = god(un[j - 1], un[j], fv[j - 1], fv[j]);
    if (s.periodic) {
      fx[0] = fx[n_cells] = god(un[n_cells - 1], un[0], fv[n_cells - 1], fv[0]);
    } else {
      fx[0] = god(s.ghost_left, un[0], fl_ghost, fv[0]);
      fx[n_cells] = god(un[n_cells - 1], s.ghost_right, fv[n_cells - 1], fr_ghost);
    }

    if (s.steady) {
      double delta = 0.0;
      for (int j = 0; j < n_cells; ++j) {
        double upd = lam * (fx[j + 1] - fx[j]);
        delta = std::max(delta, std::abs(upd));
        un[j] -= upd;
      }
      time += dt;
      if (delta == 0.0) break;
    } else {
      for (int j = 0; j < n_cells; ++j) un[j] -= lam * (fx[j + 1] - fx[j]);
      time += dt;
    }
  }
}

}  // namespace

double FvProfile::eval(double xx) const {
  const auto n = static_cast<int>(x.size());
  int j = static_cast<int>(std::floor((xx - x_left) / dx()));
  j = std::max(0, std::min(n - 1, j));
  return u(j);
}

double burgers_characteristics(const Problem& p, double x, double t) {
  if (p.id == 1) return sine_burgers(x, t);
  if (p.id == 3) return 1.0 + sine_burgers(x - t, t);
  throw std::invalid_argument("burgers_characteristics: only catalog problems 1 and 3");
}

double riemann_selfsim(const Problem& p, double uL, double uR, double xi) {
  if (uL == uR) return uL;
  double lo = std::min(uL, uR), hi = std::max(uL, uR);
  const bool minimize = uL <= uR;  // Osher: min of f(u) - xi u, else max
  auto objective = [&](double u) { return p.flux(u) - xi * u; };

  // Candidates: the two states plus the stationary points f'(u) = xi,
  // located by dense scan and bisection.
  double best_u = uL;
  double best_v = objective(uL);
  auto consider = [&](double u) {
    double v = objective(u);
    if ((minimize && v < best_v) || (!minimize && v > best_v)) {
      best_v = v;
      best_u = u;
    }
  };
  consider(uR);
  const int n = 4096;
  auto slope = [&](double u) { return p.flux_deriv(u) - xi; };
  double prev = slope(lo), xprev = lo;
  for (int i = 1; i <= n; ++i) {
    double u = lo + (hi - lo) * i / n;
    double s = slope(u);
    if ((prev < 0.0) != (s < 0.0)) {
      double a = xprev, b = u, fa = prev;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        double fm = slope(mid);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      consider(0.5 * (a + b));
    }
    xprev = u;
    prev = s;
  }
  return best_u;
}

FvProfile fv_oracle(const Problem& p, int n_cells, double t, bool steady) {
  if (n_cells < 10000)
    throw std::invalid_argument("fv_oracle: reference marches need at least 10000 cells");
  FvProfile prof;
  prof.x_left = 0.0;
  prof.x_right = 1.0;
  const double dx = 1.0 / n_cells;
  prof.x.resize(n_cells);
  prof.u.resize(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    prof.x(j) = (j + 0.5) * dx;
    prof.u(j) = p.initial(prof.x(j));
  }

  const double lf = max_wave_speed(p, p.lower, p.upper);
  if (lf <= 0.0) return prof;

  MarchSetup s;
  s.n_cells = n_cells;
  s.t = t;
  s.dt_cfl = 0.45 * dx / lf;
  s.steady = steady;
  s.periodic = p.bc.kind == BoundaryCondition::Kind::periodic;
  s.ghost_left = p.bc.left;
  s.ghost_right = p.bc.right;
  for (double c : p.flux_extrema)
    if (c > p.lower && c < p.upper) {
      s.ce.push_back(c);
      s.fce.push_back(p.flux(c));
    }

  std::vector<double> un(prof.u.data(), prof.u.data() + n_cells);
  // the id selects the inlined catalog flux; custom problems (id 0) go
  // through the type-erased path
  switch (p.id) {
    case 1:
    case 2:
    case 3:
      fv_march(BurgersFlux{}, s, un);
      break;
    case 4:
      fv_march(BlHalfFlux{}, s, un);
      break;
    case 5:
      fv_march(BlQuarterFlux{}, s, un);
      break;
    default:
      fv_march(AnyFlux{&p.flux}, s, un);
      break;
  }

  for (int j = 0; j < n_cells; ++j) prof.u(j) = un[j];
  if (prof.u.minCoeff() < p.lower - 1e-12 || prof.u.maxCoeff() > p.upper + 1e-12)
    throw std::runtime_error("fv_oracle: maximum principle violated");
  return prof;
}

bool has_exact_solution(const Problem& p) { return p.id >= 1 && p.id <= 4; }

double exact_solution(const Problem& p, double x, double t) {
  switch (p.id) {
    case 1:
    case 3:
      return burgers_characteristics(p, x, t);
    case 2:
      return x < 0.5 ? 1.0 : (x > 0.5 ? -1.0 : 0.0);
    case 4:
      if (t <= 0.0) return p.initial(x);
      return riemann_selfsim(p, 1.0, 0.0, (x - 0.5) / t);
    default:
      throw std::invalid_argument("exact_solution: no analytic reference for this problem");
  }
}

}  // namespace idgsem
