#include "idgsem/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "idgsem/adapt.hpp"

namespace idgsem {

namespace {

double inf_norm(const Field& f) { return f.cwiseAbs().maxCoeff(); }

double inf_norm(const std::vector<Field>& fs) {
  double m = 0.0;
  for (const auto& f : fs) m = std::max(m, inf_norm(f));
  return m;
}

void require_picard_preconditions(const SchemeConfig& cfg) {
  if (cfg.visc.mode != ViscosityMode::full || cfg.visc.d_space <= 0.0)
    throw std::invalid_argument("picard: requires full graph viscosity");
}

// Fan average of the volume pair (u_i, u_k) written against the derivative
// entry D_ik, i.e. the term the convex-combination map averages. The
// orientation follows the sign of D_ik and the implied alpha is
// d w_k / (8 beta |D_ik|), at or above L_f under the full-mode coefficient.
double volume_fan_average(const Problem& p, const SchemeConfig& cfg, double ui, double uk,
                          double dik, double d, double wk, double beta) {
  double base = (1.0 - beta) * ui + beta * uk;
  if (dik == 0.0) return base;
  double s = dik > 0.0 ? 1.0 : -1.0;
  double h = h_ec(p, cfg.ec, ui, uk, s);
  return base - (h - p.flux(ui) * s) * (4.0 * beta * std::abs(dik)) / (d * wk);
}

// Monotone three-point face update U - (h(U, trace, n) - f(U) n)/(2 Lf).
double face_update(const Problem& p, const SchemeConfig& cfg, double ui, double trace, double n,
                   double lf) {
  return ui - (interface_flux(p, cfg.flux, ui, trace, n) - p.flux(ui) * n) / (2.0 * lf);
}

struct PicardContext {
  double lf = 0.0;  // global wave-speed bound, the face alpha
};

PicardContext make_picard_context(const Problem& p) {
  PicardContext ctx;
  ctx.lf = max_wave_speed(p, p.lower, p.upper);
  return ctx;
}

}  // namespace

Field picard_step_be(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                     const Field& u_old, const Field& guess, double dt) {
  require_picard_preconditions(cfg);
  const int n = b.size();
  const double J = g.jacobian();
  const PicardContext ctx = make_picard_context(p);
  Field out(g.n_cells, n);
  for (int c = 0; c < g.n_cells; ++c) {
    const double d = cfg.visc.space_coeff(c);
    for (int i = 0; i < n; ++i) {
      double num = u_old(c, i);
      double den = 1.0;
      for (int k = 0; k < n; ++k) {
        double beta = beta_coeff(cfg.ec, guess(c, i), guess(c, k));
        double gamma = dt * d * b.weights(k) / (2.0 * beta * J);
        num += gamma * volume_fan_average(p, cfg, guess(c, i), guess(c, k), b.deriv(i, k), d,
                                          b.weights(k), beta);
        den += gamma;
      }
      if (i == n - 1) {
        double gamma = 2.0 * dt * ctx.lf / (b.weights(i) * J);
        num += gamma *
               face_update(p, cfg, guess(c, i), neighbor_trace(g, guess, c, Side::right), 1.0,
                           ctx.lf);
        den += gamma;
      }
      if (i == 0) {
        double gamma = 2.0 * dt * ctx.lf / (b.weights(i) * J);
        num += gamma *
               face_update(p, cfg, guess(c, i), neighbor_trace(g, guess, c, Side::left), -1.0,
                           ctx.lf);
        den += gamma;
      }
      out(c, i) = num / den;
    }
  }
  return out;
}

SlabState picard_step_st(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                         const SchemeConfig& cfg, const SlabState& guess) {
  require_picard_preconditions(cfg);
  if (cfg.visc.d_time <= 0.0)
    throw std::invalid_argument("picard: requires full time graph viscosity");
  const int n = bp.size();
  const int q = guess.q();
  const double J = g.jacobian();
  const double dt = guess.dt;
  const PicardContext ctx = make_picard_context(p);

  SlabState out = guess;
  for (int r = 0; r <= q; ++r) {
    const Field& ur = guess.levels[r];
    const double wr = bq.weights(r);
    for (int c = 0; c < g.n_cells; ++c) {
      const double d = cfg.visc.space_coeff(c);
      const double dn = cfg.visc.time_coeff(c);
      for (int i = 0; i < n; ++i) {
        double num = 0.0;
        double den = 0.0;
        if (r == 0) {
          num += guess.prev(c, i);
          den += 1.0;
        }
        // time couplings
        for (int m = 0; m <= q; ++m) {
          double beta = beta_coeff(cfg.ec, ur(c, i), guess.levels[m](c, i));
          double gn = wr * (dn * bq.weights(m) - 4.0 * bq.deriv(r, m) * beta);
          if (gn < 0.0) throw std::runtime_error("picard: time coefficient turned negative");
          num += gn * guess.levels[m](c, i);
          den += gn;
        }
        // space couplings at this time node
        for (int k = 0; k < n; ++k) {
          double beta = beta_coeff(cfg.ec, ur(c, i), ur(c, k));
          double gamma = 0.5 * wr * dt * d * bp.weights(k) / (2.0 * beta * J);
          num += gamma * volume_fan_average(p, cfg, ur(c, i), ur(c, k), bp.deriv(i, k), d,
                                            bp.weights(k), beta);
          den += gamma;
        }
        if (i == n - 1) {
          double gamma = 0.5 * wr * 2.0 * dt * ctx.lf / (bp.weights(i) * J);
          num += gamma *
                 face_update(p, cfg, ur(c, i), neighbor_trace(g, ur, c, Side::right), 1.0, ctx.lf);
          den += gamma;
        }
        if (i == 0) {
          double gamma = 0.5 * wr * 2.0 * dt * ctx.lf / (bp.weights(i) * J);
          num += gamma *
                 face_update(p, cfg, ur(c, i), neighbor_trace(g, ur, c, Side::left), -1.0, ctx.lf);
          den += gamma;
        }
        out.levels[r](c, i) = num / den;
      }
    }
  }
  return out;
}

namespace {

template <class StepFn, class ResidFn>
SolveResult picard_drive(StepFn step, ResidFn resid, int max_iters, double tol_abs,
                         double tol_rel) {
  SolveResult res;
  res.used_picard = true;
  double r0 = resid();
  double tol = tol_abs + tol_rel * r0;
  double best = r0;
  int since_best = 0;
  double rnorm = r0;
  for (int it = 0; it < max_iters; ++it) {
    if (rnorm <= tol) {
      res.converged = true;
      res.iterations = it;
      res.residual_norm = rnorm;
      return res;
    }
    step();
    rnorm = resid();
    if (rnorm < best * (1.0 - 1e-12)) {
      best = rnorm;
      since_best = 0;
    } else if (++since_best >= 50) {
      res.iterations = it + 1;
      res.residual_norm = rnorm;
      return res;  // stagnation over a 50-iteration window
    }
  }
  res.converged = rnorm <= tol;
  res.iterations = max_iters;
  res.residual_norm = rnorm;
  return res;
}

}  // namespace

SolveResult solve_be_picard(const Grid1D& g, const Basis& b, const Problem& p,
                            const SchemeConfig& cfg, Field& u, const Field& u_old, double dt,
                            const SolverConfig& sc) {
  return picard_drive([&] { u = picard_step_be(g, b, p, cfg, u_old, u, dt); },
                      [&] { return inf_norm(be_residual(g, b, p, cfg, u, u_old, dt)); },
                      sc.max_picard, sc.tol_abs, sc.tol_rel);
}

SolveResult solve_st_picard(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                            const SchemeConfig& cfg, SlabState& slab, const SolverConfig& sc) {
  return picard_drive([&] { slab = picard_step_st(g, bp, bq, p, cfg, slab); },
                      [&] { return inf_norm(st_residual(g, bp, bq, p, cfg, slab)); },
                      sc.max_picard, sc.tol_abs, sc.tol_rel);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void require_square(const SchemeConfig& cfg) {
  if (!cfg.ec.is_square)
    throw std::invalid_argument("newton: the exact linearization covers the square-entropy EC flux");
}

// Shared space-part linearization at one field, scaled by `scale`, writing
// entries through an index map (c, i) -> global row/column.
template <class IndexFn>
void add_space_jacobian(const Grid1D& g, const Basis& b, const Problem& p,
                        const SchemeConfig& cfg, const Field& u, double scale, IndexFn idx,
                        Triplets& trip) {
  const int n = b.size();
  const bool periodic = g.bc.kind == BoundaryCondition::Kind::periodic;
  for (int c = 0; c < g.n_cells; ++c) {
    const double d = cfg.visc.space_coeff(c);
    for (int i = 0; i < n; ++i) {
      const int row = idx(c, i);
      double diag = 0.0;
      for (int k = 0; k < n; ++k) {
        auto hd = h_ec_with_derivs(p, u(c, i), u(c, k));
        diag += 2.0 * b.qmat(i, k) * hd.d1;
        trip.emplace_back(row, idx(c, k), scale * 2.0 * b.qmat(i, k) * hd.d2);
      }
      if (d > 0.0)
        for (int k = 0; k < n; ++k) {
          double vterm = d * b.weights(i) * ((k == i ? 1.0 : 0.0) - 0.5 * b.weights(k));
          trip.emplace_back(row, idx(c, k), scale * vterm);
        }
      if (i == n - 1) {
        auto fd =
            interface_flux_with_derivs(p, cfg.flux, u(c, i), neighbor_trace(g, u, c, Side::right), 1.0);
        diag += fd.d1 - p.flux_deriv(u(c, i));
        if (c + 1 < g.n_cells) trip.emplace_back(row, idx(c + 1, 0), scale * fd.d2);
        else if (periodic) trip.emplace_back(row, idx(0, 0), scale * fd.d2);
      }
      if (i == 0) {
        auto fd =
            interface_flux_with_derivs(p, cfg.flux, u(c, i), neighbor_trace(g, u, c, Side::left), -1.0);
        diag += fd.d1 + p.flux_deriv(u(c, i));
        if (c > 0) trip.emplace_back(row, idx(c - 1, n - 1), scale * fd.d2);
        else if (periodic) trip.emplace_back(row, idx(g.n_cells - 1, n - 1), scale * fd.d2);
      }
      trip.emplace_back(row, row, scale * diag);
    }
  }
}

}  // namespace

Eigen::SparseMatrix<double> be_jacobian(const Grid1D& g, const Basis& b, const Problem& p,
                                        const SchemeConfig& cfg, const Field& u, double dt) {
  require_square(cfg);
  const int n = b.size();
  const int N = g.n_cells * n;
  Triplets trip;
  trip.reserve(static_cast<size_t>(N) * (n + 3));
  auto idx = [n](int c, int i) { return c * n + i; };
  add_space_jacobian(g, b, p, cfg, u, 1.0, idx, trip);
  for (int c = 0; c < g.n_cells; ++c)
    for (int i = 0; i < n; ++i)
      trip.emplace_back(idx(c, i), idx(c, i), b.weights(i) * g.jacobian() / dt);
  Eigen::SparseMatrix<double> jac(N, N);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

Eigen::SparseMatrix<double> st_jacobian(const Grid1D& g, const Basis& bp, const Basis& bq,
                                        const Problem& p, const SchemeConfig& cfg,
                                        const SlabState& slab) {
  require_square(cfg);
  const int n = bp.size();
  const int q = slab.q();
  const int N = g.n_cells * (q + 1) * n;
  const double J = g.jacobian();
  Triplets trip;
  trip.reserve(static_cast<size_t>(N) * (n + q + 4));
  auto idx = [&](int c, int r, int i) { return (c * (q + 1) + r) * n + i; };

  for (int r = 0; r <= q; ++r) {
    auto level_idx = [&](int c, int i) { return idx(c, r, i); };
    add_space_jacobian(g, bp, p, cfg, slab.levels[r], 0.5 * bq.weights(r) * slab.dt, level_idx,
                       trip);
  }
  for (int c = 0; c < g.n_cells; ++c) {
    const double dn = cfg.visc.time_coeff(c);
    for (int i = 0; i < n; ++i) {
      const double wiJ = bp.weights(i) * J;
      for (int r = 0; r <= q; ++r) {
        const int row = idx(c, r, i);
        double diag = 0.0;
        for (int m = 0; m <= q; ++m) {
          auto ud = u_ec_with_derivs(slab.levels[r](c, i), slab.levels[m](c, i));
          diag += 2.0 * bq.qmat(r, m) * ud.d1;
          double off = 2.0 * bq.qmat(r, m) * ud.d2;
          off += dn * bq.weights(r) * ((m == r ? 2.0 : 0.0) - bq.weights(m));
          trip.emplace_back(row, idx(c, m, i), wiJ * off);
        }
        if (r == 0) diag += 1.0;
        trip.emplace_back(row, row, wiJ * diag);
      }
    }
  }
  Eigen::SparseMatrix<double> jac(N, N);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

namespace {

template <class ResidFn, class JacFn, class ApplyFn>
SolveResult newton_drive(ResidFn resid, JacFn jac, ApplyFn apply, int max_iters, double tol_abs,
                         double tol_rel) {
  SolveResult res;
  vec f = resid();
  double rnorm = f.cwiseAbs().maxCoeff();
  const double tol = tol_abs + tol_rel * rnorm;
  int polish_left = 3;
  bool met = rnorm <= tol;
  double best = rnorm;
  int since_best = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (met) {
      // push the root toward the roundoff floor while progress is cheap
      if (polish_left == 0) break;
      --polish_left;
    } else if (since_best >= 25) {
      res.iterations = it;
      res.residual_norm = rnorm;
      return res;  // stagnating away from the root; let the caller regroup
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> jm = jac();
    lu.compute(jm);
    if (lu.info() != Eigen::Success) {
      res.iterations = it;
      res.residual_norm = rnorm;
      return res;
    }
    vec delta = lu.solve(f);
    if (!delta.allFinite()) {
      res.iterations = it;
      res.residual_norm = rnorm;
      return res;
    }
    apply(delta);
    f = resid();
    double next = f.cwiseAbs().maxCoeff();
    if (!met && !(next < rnorm)) {
      // backtracking on the residual norm; the generalized derivative of
      // the Godunov flux can point across a kink at full step length
      double lambda = 1.0;
      for (int bt = 0; bt < 40 && !(next < rnorm); ++bt) {
        vec retreat = -(0.5 * lambda) * delta;
        apply(retreat);  // move from x(lambda) to x(lambda/2)
        lambda *= 0.5;
        f = resid();
        next = f.cwiseAbs().maxCoeff();
      }
    }
    res.iterations = it + 1;
    if (met && next >= 0.5 * rnorm) {
      rnorm = std::min(rnorm, next);
      break;
    }
    rnorm = next;
    if (rnorm < 0.5 * best) {
      best = rnorm;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (!met && rnorm <= tol) met = true;
  }
  res.converged = met || rnorm <= tol;
  res.residual_norm = rnorm;
  return res;
}

vec flatten_field(const Field& f) {
  vec v(f.size());
  int k = 0;
  for (int c = 0; c < f.rows(); ++c)
    for (int i = 0; i < f.cols(); ++i) v(k++) = f(c, i);
  return v;
}

}  // namespace

SolveResult solve_be_newton(const Grid1D& g, const Basis& b, const Problem& p,
                            const SchemeConfig& cfg, Field& u, const Field& u_old, double dt,
                            const SolverConfig& sc) {
  const int n = b.size();
  auto resid = [&] { return flatten_field(be_residual(g, b, p, cfg, u, u_old, dt)); };
  auto jac = [&] { return be_jacobian(g, b, p, cfg, u, dt); };
  auto apply = [&](const vec& delta) {
    int k = 0;
    for (int c = 0; c < g.n_cells; ++c)
      for (int i = 0; i < n; ++i) u(c, i) -= delta(k++);
  };
  return newton_drive(resid, jac, apply, sc.max_newton, sc.tol_abs, sc.tol_rel);
}

SolveResult solve_st_newton(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                            const SchemeConfig& cfg, SlabState& slab, const SolverConfig& sc) {
  const int n = bp.size();
  const int q = slab.q();
  auto resid = [&] {
    auto fs = st_residual(g, bp, bq, p, cfg, slab);
    vec v(g.n_cells * (q + 1) * n);
    int k = 0;
    for (int c = 0; c < g.n_cells; ++c)
      for (int r = 0; r <= q; ++r)
        for (int i = 0; i < n; ++i) v(k++) = fs[r](c, i);
    return v;
  };
  auto jac = [&] { return st_jacobian(g, bp, bq, p, cfg, slab); };
  auto apply = [&](const vec& delta) {
    int k = 0;
    for (int c = 0; c < g.n_cells; ++c)
      for (int r = 0; r <= q; ++r)
        for (int i = 0; i < n; ++i) slab.levels[r](c, i) -= delta(k++);
  };
  return newton_drive(resid, jac, apply, sc.max_newton, sc.tol_abs, sc.tol_rel);
}

namespace {

// Newton with pseudo-transient continuation: when the solve from the given
// guess fails, the same step is attempted with half the time step purely to
// manufacture a better guess, then re-solved at the true dt.
SolveResult newton_continuation_be(const Grid1D& g, const Basis& b, const Problem& p,
                                   const SchemeConfig& cfg, Field& u, const Field& u_old,
                                   double dt, const SolverConfig& sc, int depth) {
  SolveResult res = solve_be_newton(g, b, p, cfg, u, u_old, dt, sc);
  if (res.converged || depth <= 0) return res;
  Field half = u_old;
  SolveResult rhalf = newton_continuation_be(g, b, p, cfg, half, u_old, 0.5 * dt, sc, depth - 1);
  if (!rhalf.converged) {
    res.iterations += rhalf.iterations;
    return res;
  }
  u = half;
  SolveResult res2 = solve_be_newton(g, b, p, cfg, u, u_old, dt, sc);
  res2.iterations += res.iterations + rhalf.iterations;
  return res2;
}

SolveResult newton_continuation_st(const Grid1D& g, const Basis& bp, const Basis& bq,
                                   const Problem& p, const SchemeConfig& cfg, SlabState& slab,
                                   const SolverConfig& sc, int depth) {
  SolveResult res = solve_st_newton(g, bp, bq, p, cfg, slab, sc);
  if (res.converged || depth <= 0) return res;
  SlabState half = slab;
  half.dt = 0.5 * slab.dt;
  for (auto& lvl : half.levels) lvl = slab.prev;
  SolveResult rhalf = newton_continuation_st(g, bp, bq, p, cfg, half, sc, depth - 1);
  if (!rhalf.converged) {
    res.iterations += rhalf.iterations;
    return res;
  }
  for (int r = 0; r <= slab.q(); ++r) slab.levels[r] = half.levels[r];
  SolveResult res2 = solve_st_newton(g, bp, bq, p, cfg, slab, sc);
  res2.iterations += res.iterations + rhalf.iterations;
  return res2;
}

SolveResult dispatch_be(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                        Field& u, const Field& u_old, double dt, const SolverConfig& sc) {
  if (sc.method == SolveMethod::picard) return solve_be_picard(g, b, p, cfg, u, u_old, dt, sc);
  SolveResult res = newton_continuation_be(g, b, p, cfg, u, u_old, dt, sc, 10);
  if (!res.converged && sc.method == SolveMethod::newton_with_picard_fallback &&
      cfg.visc.mode == ViscosityMode::full) {
    u = u_old;
    SolveResult fb = solve_be_picard(g, b, p, cfg, u, u_old, dt, sc);
    fb.iterations += res.iterations;
    return fb;
  }
  return res;
}

SolveResult dispatch_st(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                        const SchemeConfig& cfg, SlabState& slab, const SolverConfig& sc) {
  if (sc.method == SolveMethod::picard) return solve_st_picard(g, bp, bq, p, cfg, slab, sc);
  SolveResult res = newton_continuation_st(g, bp, bq, p, cfg, slab, sc, 10);
  if (!res.converged && sc.method == SolveMethod::newton_with_picard_fallback &&
      cfg.visc.mode == ViscosityMode::full) {
    for (auto& lvl : slab.levels) lvl = slab.prev;
    SolveResult fb = solve_st_picard(g, bp, bq, p, cfg, slab, sc);
    fb.iterations += res.iterations;
    return fb;
  }
  return res;
}

}  // namespace

RunReport advance(const Problem& prob, const RunConfig& cfg) {
  RunReport report;
  report.scheme = cfg.scheme;
  report.problem_id = prob.id;
  report.p = cfg.p;
  report.q = cfg.scheme == SchemeKind::space_time ? cfg.q : 0;
  report.flux = cfg.flux;
  if (cfg.scheme == SchemeKind::space_time && cfg.q < 1)
    throw std::invalid_argument("advance: space-time scheme requires q >= 1");

  const Basis bp = build_basis<double>(cfg.p);
  const Basis bq = build_basis<double>(cfg.scheme == SchemeKind::space_time ? cfg.q : 1);
  Grid1D g = make_grid(cfg.n_cells, prob);
  report.grid = g;

  SchemeConfig scheme;
  scheme.ec = square_ec();
  scheme.flux = cfg.flux;
  scheme.visc = make_viscosity(cfg.viscosity,
                               bp, cfg.scheme == SchemeKind::space_time ? &bq : nullptr, prob,
                               true);

  report.wave_speed = max_wave_speed(prob, prob.lower, prob.upper);
  const double dt_cfl = cfg.cfl * g.dx() / report.wave_speed;

  Field u = project_initial(g, bp, prob);
  report.initial = u;

  const double t_final =
      cfg.final_time_override >= 0.0 ? cfg.final_time_override : prob.final_time;
  const bool steady = prob.steady && cfg.final_time_override < 0.0;
  double t = 0.0;
  int step = 0;

  while (true) {
    if (steady) {
      if (step >= cfg.solver.max_steady_steps) break;
    } else if (t >= t_final * (1.0 - 1e-14) || t_final <= 0.0) {
      break;
    }
    double dt = steady ? dt_cfl : std::min(dt_cfl, t_final - t);

    if (cfg.viscosity == ViscosityMode::adaptive)
      scheme.visc.multiplier = troubled_cell_multipliers(bp, u);

    StepRecord rec;
    rec.dt = dt;
    SolveResult res;
    if (cfg.scheme == SchemeKind::backward_euler) {
      Field unew = u;
      res = dispatch_be(g, bp, prob, scheme, unew, u, dt, cfg.solver);
      rec.levels = {unew};
    } else {
      SlabState slab;
      slab.dt = dt;
      slab.prev = u;
      slab.levels.assign(cfg.q + 1, u);
      res = dispatch_st(g, bp, bq, prob, scheme, slab, cfg.solver);
      rec.levels = std::move(slab.levels);
    }
    rec.solver_iters = res.iterations;
    rec.used_picard = res.used_picard;
    t += dt;
    rec.t = t;
    if (!res.converged) {
      report.failed = true;
      report.failed_step = step;
      report.failure = "nonlinear solver failed at step " + std::to_string(step) +
                       " (residual " + std::to_string(res.residual_norm) + ")";
      report.steps.push_back(std::move(rec));
      return report;
    }
    double delta = inf_norm(rec.levels.back() - u);
    u = rec.levels.back();
    report.steps.push_back(std::move(rec));
    ++step;
    if (steady && delta < cfg.solver.steady_tol) break;
  }
  return report;
}

}  // namespace idgsem
