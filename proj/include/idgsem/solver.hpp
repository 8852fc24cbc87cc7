#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "idgsem/scheme.hpp"

namespace idgsem {

enum class SolveMethod { picard, newton, newton_with_picard_fallback };
enum class SchemeKind { backward_euler, space_time };

struct SolverConfig {
  SolveMethod method = SolveMethod::newton_with_picard_fallback;
  double tol_abs = 1e-11;
  double tol_rel = 1e-10;
  int max_newton = 200;
  int max_picard = 5000;
  double steady_tol = 1e-10;
  int max_steady_steps = 5000;
};

struct SolveResult {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  bool used_picard = false;
};

/// One subiteration of the bound-preserving fixed-point map: a convex
/// combination of fan averages and monotone three-point updates, so the
/// output stays in [lower, upper] whenever the input does. Requires full
/// graph viscosity.
Field picard_step_be(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                     const Field& u_old, const Field& guess, double dt);

SlabState picard_step_st(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                         const SchemeConfig& cfg, const SlabState& guess);

/// Picard iteration driven to a residual tolerance; signals divergence when
/// the best residual fails to improve over a 50-iteration window.
SolveResult solve_be_picard(const Grid1D& g, const Basis& b, const Problem& p,
                            const SchemeConfig& cfg, Field& u, const Field& u_old, double dt,
                            const SolverConfig& sc);
SolveResult solve_st_picard(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                            const SchemeConfig& cfg, SlabState& slab, const SolverConfig& sc);

/// Exact linearizations of the residuals (square-entropy EC flux).
Eigen::SparseMatrix<double> be_jacobian(const Grid1D& g, const Basis& b, const Problem& p,
                                        const SchemeConfig& cfg, const Field& u, double dt);
Eigen::SparseMatrix<double> st_jacobian(const Grid1D& g, const Basis& bp, const Basis& bq,
                                        const Problem& p, const SchemeConfig& cfg,
                                        const SlabState& slab);

/// Newton with a sparse direct factorization; after meeting the tolerance a
/// couple of polish iterations push the residual toward the roundoff floor
/// so conservation and entropy budgets hold to it.
SolveResult solve_be_newton(const Grid1D& g, const Basis& b, const Problem& p,
                            const SchemeConfig& cfg, Field& u, const Field& u_old, double dt,
                            const SolverConfig& sc);
SolveResult solve_st_newton(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                            const SchemeConfig& cfg, SlabState& slab, const SolverConfig& sc);

struct StepRecord {
  double t = 0.0;  // time at the end of the step
  double dt = 0.0;
  int solver_iters = 0;
  bool used_picard = false;
  std::vector<Field> levels;  // backward Euler: one field; space-time: q+1
};

struct RunReport {
  SchemeKind scheme = SchemeKind::space_time;
  int problem_id = 0;
  Grid1D grid;
  int p = 3;
  int q = 3;
  FluxKind flux = FluxKind::godunov;
  double wave_speed = 0.0;  // bound used by the CFL rule
  Field initial;
  std::vector<StepRecord> steps;
  bool failed = false;
  int failed_step = -1;
  std::string failure;

  const Field& final_field() const {
    return steps.empty() ? initial : steps.back().levels.back();
  }
};

struct RunConfig {
  SchemeKind scheme = SchemeKind::space_time;
  int p = 3;
  int q = 3;
  int n_cells = 40;
  double cfl = 1.0;
  ViscosityMode viscosity = ViscosityMode::full;
  FluxKind flux = FluxKind::godunov;
  SolverConfig solver;
  double final_time_override = -1.0;  // < 0: use the problem's final time
};

/// Time marching with dt = CFL dx / L_f (last step clipped), or the steady
/// iteration for steady problems. Stores every solved level for post-hoc
/// verification.
RunReport advance(const Problem& prob, const RunConfig& cfg);

}  // namespace idgsem
