#include "idgsem/twopoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "idgsem/quadrature.hpp"

namespace idgsem {

namespace {

// theta-integral over [t0, t1] with panel count driven by the span of the
// path in u, so the rational catalog fluxes resolve to machine precision.
template <class F>
double theta_integral(F&& f, double t0, double t1, double u_span, int npts) {
  return gl_panels(f, t0, t1, npts, panels_for_span(u_span));
}

void check_alpha(const Problem& p, double a, double b, double alpha) {
  double need = max_wave_speed(p, std::min(a, b), std::max(a, b));
  if (alpha < need * (1.0 - 1e-12))
    throw std::domain_error("fan average: alpha below the Lipschitz bound of the flux");
}

// Path u(theta) from a to b in entropy variables; identity for the square
// entropy.
double ec_path(const EcEntropy& ec, double a, double b, double theta) {
  if (ec.is_square) return a + theta * (b - a);
  double va = ec.v(a), vb = ec.v(b);
  return ec.u_of_v(theta * vb + (1.0 - theta) * va);
}

// Kink location of |u - K| along the path, if the path crosses K.
bool kruzkov_split(const EcEntropy& ec, double K, double a, double b, double& theta_K) {
  if ((a - K) * (b - K) >= 0.0) return false;
  if (ec.is_square) {
    theta_K = (K - a) / (b - a);
    return true;
  }
  double lo = 0.0, hi = 1.0;
  double flo = ec_path(ec, a, b, lo) - K;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = ec_path(ec, a, b, mid) - K;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  theta_K = 0.5 * (lo + hi);
  return true;
}

}  // namespace

EcEntropy square_ec() {
  EcEntropy ec;
  ec.is_square = true;
  ec.theta = [](double u) { return 0.5 * u * u; };
  ec.v = [](double u) { return u; };
  ec.u_of_v = [](double v) { return v; };
  return ec;
}

EcEntropy custom_ec(std::function<double(double)> theta, std::function<double(double)> v,
                    std::function<double(double)> u_of_v) {
  EcEntropy ec;
  ec.is_square = false;
  ec.theta = std::move(theta);
  ec.v = std::move(v);
  ec.u_of_v = std::move(u_of_v);
  return ec;
}

double h_ec(const Problem& p, const EcEntropy& ec, double a, double b, double n) {
  if (ec.is_square) {
    if (p.flux_segment_mean) return p.flux_segment_mean(a, b) * n;
    return theta_integral([&](double t) { return p.flux(a + t * (b - a)); }, 0.0, 1.0, b - a,
                          32) *
           n;
  }
  return theta_integral([&](double t) { return p.flux(ec_path(ec, a, b, t)); }, 0.0, 1.0, b - a,
                        32) *
         n;
}

FluxDerivs h_ec_with_derivs(const Problem& p, double a, double b) {
  FluxDerivs r;
  if (p.flux_segment_mean && p.flux_segment_mean_d1) {
    r.value = p.flux_segment_mean(a, b);
    r.d1 = p.flux_segment_mean_d1(a, b);
    r.d2 = p.flux_segment_mean_d1(b, a);  // symmetry of the segment mean
    return r;
  }
  const GaussLegendre& gl = gauss_legendre(32);
  const int npanels = panels_for_span(b - a);
  for (int pnl = 0; pnl < npanels; ++pnl) {
    double t0 = static_cast<double>(pnl) / npanels;
    double w = 1.0 / npanels;
    for (int k = 0; k < 32; ++k) {
      double t = t0 + 0.5 * w * (1.0 + gl.nodes(k));
      double wt = 0.5 * w * gl.weights(k);
      double u = a + t * (b - a);
      double f = p.flux(u);
      double fp = p.flux_deriv(u);
      r.value += wt * f;
      r.d1 += wt * (1.0 - t) * fp;
      r.d2 += wt * t * fp;
    }
  }
  return r;
}

double u_ec(const EcEntropy& ec, double a, double b) {
  if (ec.is_square) return 0.5 * (a + b);
  return a + 2.0 * beta_coeff(ec, a, b) * (b - a);
}

FluxDerivs u_ec_with_derivs(double a, double b) {
  FluxDerivs r;
  r.value = 0.5 * (a + b);
  r.d1 = 0.5;
  r.d2 = 0.5;
  return r;
}

double beta_coeff(const EcEntropy& ec, double a, double b) {
  if (ec.is_square || a == b) return 0.25;
  double integral = theta_integral(
      [&](double t) { return (ec_path(ec, a, b, t) - a) / (b - a); }, 0.0, 1.0, b - a, 64);
  return 0.5 * integral;
}

double fan_average_U(const Problem& p, const EcEntropy& ec, double a, double b, double n,
                     double alpha) {
  check_alpha(p, a, b, alpha);
  double beta = beta_coeff(ec, a, b);
  double h = h_ec(p, ec, a, b, n);
  return (1.0 - beta) * a + beta * b - (h - p.flux(a) * n) / (2.0 * alpha * std::abs(n));
}

double lax_average_W(const Problem& p, double a, double b, double n, double alpha) {
  check_alpha(p, a, b, alpha);
  return 0.5 * (a + b) - (p.flux(b) - p.flux(a)) * n / (2.0 * alpha);
}

double q_ec(const Problem&, const EcEntropy& ec, const EntropyPair& pair, double a, double b,
            double n) {
  auto integrand = [&](double t) { return pair.qflux(ec_path(ec, a, b, t)); };
  double theta_K;
  if (pair.kind == EntropyPair::Kind::kruzkov && kruzkov_split(ec, pair.kruzkov_K, a, b, theta_K)) {
    double left = theta_integral(integrand, 0.0, theta_K, pair.kruzkov_K - a, 64);
    double right = theta_integral(integrand, theta_K, 1.0, b - pair.kruzkov_K, 64);
    return (left + right) * n;
  }
  return theta_integral(integrand, 0.0, 1.0, b - a, 64) * n;
}

double eta_bar(const EcEntropy& ec, const EntropyPair& pair, double a, double b) {
  auto integrand = [&](double t) { return pair.eta(ec_path(ec, a, b, t)); };
  double theta_K;
  if (pair.kind == EntropyPair::Kind::kruzkov && kruzkov_split(ec, pair.kruzkov_K, a, b, theta_K)) {
    double left = theta_integral(integrand, 0.0, theta_K, pair.kruzkov_K - a, 64);
    double right = theta_integral(integrand, theta_K, 1.0, b - pair.kruzkov_K, 64);
    return left + right;
  }
  return theta_integral(integrand, 0.0, 1.0, b - a, 64);
}

double godunov_flux(const Problem& p, double a, double b, double n) {
  return p.flux(godunov_state(p, a, b, n)) * n;
}

double godunov_state(const Problem& p, double a, double b, double n) {
  if (n < 0.0) return godunov_state(p, b, a, 1.0);
  double lo = std::min(a, b), hi = std::max(a, b);
  double best = p.flux(a);
  double state = a;
  double fb = p.flux(b);
  if (a >= b) {  // maximize over [b, a]
    if (fb > best) {
      best = fb;
      state = b;
    }
    for (double c : p.flux_extrema)
      if (c > lo && c < hi && p.flux(c) > best) {
        best = p.flux(c);
        state = c;
      }
  } else {  // minimize over [a, b]
    if (fb < best) {
      best = fb;
      state = b;
    }
    for (double c : p.flux_extrema)
      if (c > lo && c < hi && p.flux(c) < best) {
        best = p.flux(c);
        state = c;
      }
  }
  return state;
}

double rusanov_flux(const Problem& p, double a, double b, double n) {
  double lambda = lipschitz_constant(p, std::min(a, b), std::max(a, b));
  return 0.5 * (p.flux(a) + p.flux(b)) * n - 0.5 * lambda * (b - a);
}

double interface_flux(const Problem& p, FluxKind kind, double a, double b, double n) {
  return kind == FluxKind::godunov ? godunov_flux(p, a, b, n) : rusanov_flux(p, a, b, n);
}

double interface_entropy_flux(const Problem& p, FluxKind kind, const EntropyPair& pair, double a,
                              double b, double n) {
  if (kind != FluxKind::godunov)
    throw std::invalid_argument("interface_entropy_flux: only the Godunov flux has an entropy companion");
  return pair.qflux(godunov_state(p, a, b, n)) * n;
}

FluxDerivs interface_flux_with_derivs(const Problem& p, FluxKind kind, double a, double b,
                                      double n) {
  FluxDerivs r;
  if (kind == FluxKind::rusanov) {
    double lambda = lipschitz_constant(p, std::min(a, b), std::max(a, b));
    r.value = 0.5 * (p.flux(a) + p.flux(b)) * n - 0.5 * lambda * (b - a);
    r.d1 = 0.5 * p.flux_deriv(a) * n + 0.5 * lambda;
    r.d2 = 0.5 * p.flux_deriv(b) * n - 0.5 * lambda;
    return r;
  }
  if (n < 0.0) {
    FluxDerivs sw = interface_flux_with_derivs(p, kind, b, a, 1.0);
    r.value = -sw.value;
    r.d1 = -sw.d2;
    r.d2 = -sw.d1;
    return r;
  }
  double state = godunov_state(p, a, b, 1.0);
  r.value = p.flux(state);
  if (state == a) r.d1 = p.flux_deriv(a);
  if (state == b) r.d2 = p.flux_deriv(b);
  return r;
}

double ec_potential(const Problem& p, const EcEntropy& ec, double u) {
  if (ec.is_square) {
    double q = p.square_entropy_flux
                   ? p.square_entropy_flux(u)
                   : segment_integral([&](double w) { return w * p.flux_deriv(w); }, 0.0, u);
    return u * p.flux(u) - q;
  }
  double g = segment_integral([&](double w) { return ec.v(w) * p.flux_deriv(w); }, 0.0, u);
  return ec.v(u) * p.flux(u) - g;
}

double time_entropy_potential(const EcEntropy& ec, double u) {
  return ec.v(u) * u - ec.theta(u);
}

}  // namespace idgsem
