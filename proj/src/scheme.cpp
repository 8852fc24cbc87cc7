#include "idgsem/scheme.hpp"

#include <cmath>
#include <stdexcept>

namespace idgsem {

double viscosity_norm(const Basis& b) {
  double m = 0.0;
  for (int k = 0; k < b.size(); ++k)
    for (int l = 0; l < b.size(); ++l) {
      if (k == l) continue;
      double d = std::abs(b.deriv(k, l));
      m = std::max(m, std::max(d / b.weights(l), d / b.weights(k)));
    }
  return m;
}

double full_space_viscosity(const Basis& b, double lf, double lu, bool square) {
  double factor = square ? 2.0 * lf : 4.0 * lf * lu;
  return factor * viscosity_norm(b);
}

double full_time_viscosity(const Basis& bq, double lu) { return 2.0 * lu * viscosity_norm(bq); }

ViscosityConfig make_viscosity(ViscosityMode mode, const Basis& bp, const Basis* bq,
                               const Problem& p, bool square_entropy) {
  ViscosityConfig v;
  v.mode = mode;
  if (mode == ViscosityMode::none) return v;
  const double lf = max_wave_speed(p, p.lower, p.upper);
  const double lu = 1.0;  // square entropy; generic pairs pass their own bound
  if (!square_entropy)
    throw std::invalid_argument("make_viscosity: supply d_space/d_time directly for generic EC pairs");
  v.d_space = full_space_viscosity(bp, lf, lu, true);
  if (bq) v.d_time = full_time_viscosity(*bq, lu);
  return v;
}

Field space_residual(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                     const Field& u) {
  const int n = b.size();
  Field r = Field::Zero(g.n_cells, n);
  for (int c = 0; c < g.n_cells; ++c) {
    // volume flux differencing; h_ec is symmetric so each pair is evaluated once
    for (int i = 0; i < n; ++i) {
      double fii = p.flux(u(c, i));
      r(c, i) += 2.0 * b.qmat(i, i) * fii;
      for (int k = i + 1; k < n; ++k) {
        double h = h_ec(p, cfg.ec, u(c, i), u(c, k), 1.0);
        r(c, i) += 2.0 * b.qmat(i, k) * h;
        r(c, k) += 2.0 * b.qmat(k, i) * h;
      }
    }
    double tr_r = neighbor_trace(g, u, c, Side::right);
    double tr_l = neighbor_trace(g, u, c, Side::left);
    r(c, n - 1) += interface_flux(p, cfg.flux, u(c, n - 1), tr_r, 1.0) - p.flux(u(c, n - 1));
    r(c, 0) += interface_flux(p, cfg.flux, u(c, 0), tr_l, -1.0) + p.flux(u(c, 0));
  }
  return r;
}

Field graph_viscosity(const Basis& b, const ViscosityConfig& v, const Field& u) {
  const int n = b.size();
  Field out = Field::Zero(u.rows(), n);
  if (v.mode == ViscosityMode::none) return out;
  for (int c = 0; c < u.rows(); ++c) {
    double d = v.space_coeff(c);
    if (d == 0.0) continue;
    // sum_k (w_k/2)(U^i - U^k) = U^i - <u>_c since the weights sum to 2
    double avg = 0.5 * b.weights.dot(u.row(c).transpose());
    for (int i = 0; i < n; ++i) out(c, i) = d * b.weights(i) * (u(c, i) - avg);
  }
  return out;
}

Field be_residual(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                  const Field& u_new, const Field& u_old, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("be_residual: dt must be positive");
  Field f = space_residual(g, b, p, cfg, u_new) + graph_viscosity(b, cfg.visc, u_new);
  const double J = g.jacobian();
  for (int c = 0; c < g.n_cells; ++c)
    for (int i = 0; i < b.size(); ++i)
      f(c, i) += b.weights(i) * J * (u_new(c, i) - u_old(c, i)) / dt;
  return f;
}

std::vector<Field> st_time_term(const Basis& bq, const SchemeConfig& cfg, const SlabState& slab) {
  const int q = slab.q();
  const auto cells = slab.levels[0].rows();
  const auto nodes = slab.levels[0].cols();
  std::vector<Field> t(q + 1, Field::Zero(cells, nodes));
  for (int c = 0; c < cells; ++c) {
    double dn = cfg.visc.time_coeff(static_cast<int>(c));
    for (Eigen::Index i = 0; i < nodes; ++i) {
      for (int r = 0; r <= q; ++r) {
        double ur = slab.levels[r](c, i);
        double acc = 0.0;
        for (int m = 0; m <= q; ++m) {
          double um = slab.levels[m](c, i);
          acc += 2.0 * bq.qmat(r, m) * u_ec(cfg.ec, ur, um);
          acc += dn * bq.weights(r) * bq.weights(m) * (ur - um);
        }
        if (r == 0) acc += ur - slab.prev(c, i);
        t[r](c, i) = acc;
      }
    }
  }
  return t;
}

std::vector<Field> st_residual(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                               const SchemeConfig& cfg, const SlabState& slab) {
  if (!(slab.dt > 0.0)) throw std::invalid_argument("st_residual: dt must be positive");
  const int q = slab.q();
  std::vector<Field> f = st_time_term(bq, cfg, slab);
  const double J = g.jacobian();
  for (int r = 0; r <= q; ++r) {
    Field rv = space_residual(g, bp, p, cfg, slab.levels[r]) +
               graph_viscosity(bp, cfg.visc, slab.levels[r]);
    double wr = bq.weights(r);
    for (int c = 0; c < g.n_cells; ++c)
      for (int i = 0; i < bp.size(); ++i)
        f[r](c, i) = bp.weights(i) * J * f[r](c, i) + 0.5 * wr * slab.dt * rv(c, i);
  }
  return f;
}

}  // namespace idgsem
