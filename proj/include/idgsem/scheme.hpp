#pragma once

#include <vector>

#include "idgsem/grid.hpp"
#include "idgsem/twopoint.hpp"

namespace idgsem {

enum class ViscosityMode { none, full, adaptive };

/// Graph-viscosity coefficients. In full mode the base values meet the
/// provable bounds and every multiplier is one; adaptive mode scales both
/// space and time coefficients per cell by the troubled-cell multiplier.
struct ViscosityConfig {
  ViscosityMode mode = ViscosityMode::none;
  double d_space = 0.0;
  double d_time = 0.0;
  vec multiplier;  // per cell, in [0,1]; empty means all ones

  double space_coeff(int c) const {
    if (mode == ViscosityMode::none) return 0.0;
    return multiplier.size() ? d_space * multiplier(c) : d_space;
  }
  double time_coeff(int c) const {
    if (mode == ViscosityMode::none) return 0.0;
    return multiplier.size() ? d_time * multiplier(c) : d_time;
  }
};

/// max over k != l of |D_kl| against both weight normalizations (the two
/// readings of the coefficient bound; the larger is always safe).
double viscosity_norm(const Basis& b);

/// Provable space coefficient: 2 L_f max|D|/w for the square entropy,
/// 4 L_f L_u max|D|/w otherwise.
double full_space_viscosity(const Basis& b, double lf, double lu, bool square);

/// Provable time coefficient: 2 L_u max|D^q|/w.
double full_time_viscosity(const Basis& bq, double lu);

ViscosityConfig make_viscosity(ViscosityMode mode, const Basis& bp, const Basis* bq,
                               const Problem& p, bool square_entropy);

struct SchemeConfig {
  EcEntropy ec;
  FluxKind flux = FluxKind::godunov;
  ViscosityConfig visc;
};

/// DGSEM space residual: flux differencing of the EC volume flux plus the
/// interface corrections at the two cell faces.
Field space_residual(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                     const Field& u);

/// Intra-cell graph viscosity V_c^i = d_c w_i sum_k (w_k/2)(U_c^i - U_c^k).
Field graph_viscosity(const Basis& b, const ViscosityConfig& v, const Field& u);

/// Backward-Euler residual F_c^i = w_i J (U - U_old)/dt + R(U) + V(U);
/// roots are scheme solutions.
Field be_residual(const Grid1D& g, const Basis& b, const Problem& p, const SchemeConfig& cfg,
                  const Field& u_new, const Field& u_old, double dt);

/// One space-time slab: levels[r] holds all DOFs at time node t_n^r and
/// prev the solution at the end of the previous slab.
struct SlabState {
  std::vector<Field> levels;
  Field prev;
  double dt = 0.0;

  int q() const { return static_cast<int>(levels.size()) - 1; }
};

/// Upwind-in-time EC discretization T_c^{i,r} with the time graph
/// viscosity, one Field per time node.
std::vector<Field> st_time_term(const Basis& bq, const SchemeConfig& cfg, const SlabState& slab);

/// Space-time residual F_c^{i,r} = w_i J T_c^{i,r} + (w_r dt/2)(R + V) at
/// time node r.
std::vector<Field> st_residual(const Grid1D& g, const Basis& bp, const Basis& bq, const Problem& p,
                               const SchemeConfig& cfg, const SlabState& slab);

}  // namespace idgsem
