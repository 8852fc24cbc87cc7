#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "support.hpp"

using namespace idgsem;
using namespace idgsem::testing;

namespace {

SchemeConfig basic_config(const Problem& p, const Basis& bp, const Basis* bq,
                          ViscosityMode mode) {
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.flux = FluxKind::godunov;
  cfg.visc = make_viscosity(mode, bp, bq, p, true);
  return cfg;
}

}  // namespace

TEST_CASE("constant fields give zero space residual") {
  auto b = build_basis<double>(3);
  for (int id : {1, 4}) {
    CAPTURE(id);
    auto p = make_problem(id);
    auto g = make_grid(8, p);
    auto cfg = basic_config(p, b, nullptr, ViscosityMode::none);
    // constant consistent with the Dirichlet data when applicable
    double c0 = (id == 4) ? 1.0 : 0.3;
    if (id == 4) {
      // interior constant equal to the left ghost keeps only the right face active
      Field u = Field::Constant(8, 4, c0);
      auto r = space_residual(g, b, p, cfg, u);
      for (int c = 0; c + 1 < 8; ++c)
        for (int i = 0; i < 4; ++i) CHECK(std::abs(r(c, i)) < 1e-13);
    } else {
      Field u = Field::Constant(8, 4, c0);
      auto r = space_residual(g, b, p, cfg, u);
      CHECK(r.cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("space residual matches the dense advection operator") {
  auto b = build_basis<double>(2);
  auto p = linear_advection();
  auto cfg = basic_config(p, b, nullptr, ViscosityMode::none);

  // single periodic cell with nodal data xi
  {
    auto g = make_grid(1, p);
    Field u(1, 3);
    for (int i = 0; i < 3; ++i) u(0, i) = b.nodes(i);
    auto r = space_residual(g, b, p, cfg, u);
    mat L = advection_residual_matrix(g, b);
    vec oracle = L * flatten(u);
    for (int i = 0; i < 3; ++i) CHECK(r(0, i) == doctest::Approx(oracle(i)).epsilon(1e-13).scale(1.0));
  }

  // several cells, random data
  {
    auto g = make_grid(5, p);
    Field u = random_field(5, 3, -1.0, 1.0, 99);
    auto r = space_residual(g, b, p, cfg, u);
    mat L = advection_residual_matrix(g, b);
    vec oracle = L * flatten(u);
    vec got = flatten(r);
    CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("volume terms telescope: residual sums to the face flux difference") {
  auto b = build_basis<double>(3);
  for (int id : {1, 4, 5}) {
    CAPTURE(id);
    auto p = make_problem(id);
    auto g = make_grid(6, p);
    auto cfg = basic_config(p, b, nullptr, ViscosityMode::none);
    Field u = random_field(6, 4, p.lower, p.upper, 7 + id);
    auto r = space_residual(g, b, p, cfg, u);
    for (int c = 0; c < 6; ++c) {
      double hr = interface_flux(p, cfg.flux, u(c, 3), neighbor_trace(g, u, c, Side::right), 1.0);
      double hl = -interface_flux(p, cfg.flux, u(c, 0), neighbor_trace(g, u, c, Side::left), -1.0);
      CHECK(r.row(c).sum() == doctest::Approx(hr - hl).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("graph viscosity hand example and antisymmetry") {
  auto b1 = build_basis<double>(1);
  ViscosityConfig v;
  v.mode = ViscosityMode::full;
  v.d_space = 1.0;
  Field u(1, 2);
  u << 0.0, 1.0;
  auto vis = graph_viscosity(b1, v, u);
  CHECK(vis(0, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(vis(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  auto b3 = build_basis<double>(3);
  Field c = Field::Constant(4, 4, 2.2);
  v.d_space = 17.0;
  CHECK(graph_viscosity(b3, v, c).cwiseAbs().maxCoeff() == 0.0);

  Field r = random_field(4, 4, -2.0, 2.0, 13);
  auto vr = graph_viscosity(b3, v, r);
  for (int cc = 0; cc < 4; ++cc) CHECK(std::abs(vr.row(cc).sum()) < 1e-13);

  // adaptive multipliers scale per cell
  v.mode = ViscosityMode::adaptive;
  v.multiplier = vec::Zero(4);
  v.multiplier(2) = 0.5;
  auto va = graph_viscosity(b3, v, r);
  CHECK(va.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((va.row(2) - 0.5 * vr.row(2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("full-mode coefficients meet the provable bounds") {
  for (int pd : {1, 2, 3, 4}) {
    CAPTURE(pd);
    auto b = build_basis<double>(pd);
    auto prob = make_problem(4);
    auto bq = build_basis<double>(3);
    auto v = make_viscosity(ViscosityMode::full, b, &bq, prob, true);
    double lf = max_wave_speed(prob, prob.lower, prob.upper);
    double norm = 0.0;
    for (int k = 0; k <= pd; ++k)
      for (int l = 0; l <= pd; ++l)
        if (k != l)
          norm = std::max(norm, std::abs(b.deriv(k, l)) /
                                     std::min(b.weights(k), b.weights(l)));
    CHECK(v.d_space >= 2.0 * lf * norm - 1e-12);
    CHECK(v.d_time >= 2.0 * viscosity_norm(bq) - 1e-12);
  }
}

TEST_CASE("backward-Euler residual: constants, average identity, dense oracle") {
  auto b = build_basis<double>(3);
  auto p = make_problem(1);
  auto g = make_grid(6, p);
  auto cfg = basic_config(p, b, nullptr, ViscosityMode::full);

  Field c = Field::Constant(6, 4, 0.4);
  CHECK(be_residual(g, b, p, cfg, c, c, 0.01).cwiseAbs().maxCoeff() < 1e-13);

  // summing over i reproduces the cell-average update
  Field unew = random_field(6, 4, -1.0, 1.0, 21);
  Field uold = random_field(6, 4, -1.0, 1.0, 22);
  double dt = 0.0125;
  auto f = be_residual(g, b, p, cfg, unew, uold, dt);
  for (int cc = 0; cc < 6; ++cc) {
    double hr =
        interface_flux(p, cfg.flux, unew(cc, 3), neighbor_trace(g, unew, cc, Side::right), 1.0);
    double hl =
        -interface_flux(p, cfg.flux, unew(cc, 0), neighbor_trace(g, unew, cc, Side::left), -1.0);
    double lhs = cell_average(b, unew, cc);
    double rhs = cell_average(b, uold, cc) - dt / g.cell_measure() * (hr - hl) +
                 dt / g.cell_measure() * f.row(cc).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("backward-Euler linear advection step equals the dense solve") {
  auto b = build_basis<double>(2);
  auto p = linear_advection();
  auto g = make_grid(4, p);
  auto cfg = basic_config(p, b, nullptr, ViscosityMode::none);
  const int N = 12;
  double dt = 0.05;

  Field uold = random_field(4, 3, -1.0, 1.0, 31);
  mat A = advection_residual_matrix(g, b);
  vec mass(N);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 3; ++i) mass(c * 3 + i) = b.weights(i) * g.jacobian();
  mat sys = mass.asDiagonal();
  sys /= dt;
  sys += A;
  vec rhs = mass.cwiseProduct(flatten(uold)) / dt;
  vec sol = sys.fullPivLu().solve(rhs);

  // the dense solution must zero the residual
  Field unew(4, 3);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 3; ++i) unew(c, i) = sol(c * 3 + i);
  CHECK(be_residual(g, b, p, cfg, unew, uold, dt).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("graph viscosity acts as a linear scaling limiter around the cell average") {
  // A solved implicit step satisfies U_i = (1 - theta) <u> + theta * Utilde_i
  // with theta = (1 + dt d / J)^{-1} and Utilde the viscosity-free update,
  // i.e. the full-coefficient scheme pulls every DOF toward its cell mean.
  auto b = build_basis<double>(3);
  auto p = make_problem(1);
  auto g = make_grid(8, p);
  auto cfg = basic_config(p, b, nullptr, ViscosityMode::full);
  double dt = 0.01;
  Field uold = random_field(8, 4, -1.0, 1.0, 55);
  // manufacture a root of the backward-Euler residual by fixed-point: here we
  // only need *some* state u with F(u) = 0 structurally, so solve crudely by
  // relaxation on the residual
  Field u = uold;
  for (int it = 0; it < 4000; ++it) {
    Field f = be_residual(g, b, p, cfg, u, uold, dt);
    for (int c = 0; c < 8; ++c)
      for (int i = 0; i < 4; ++i)
        u(c, i) -= f(c, i) / (b.weights(i) * g.jacobian() / dt +
                              cfg.visc.d_space * b.weights(i));
    if (f.cwiseAbs().maxCoeff() < 1e-13) break;
  }
  REQUIRE(be_residual(g, b, p, cfg, u, uold, dt).cwiseAbs().maxCoeff() < 1e-11);

  auto cfg_novisc = cfg;
  cfg_novisc.visc.mode = ViscosityMode::none;
  Field r = space_residual(g, b, p, cfg_novisc, u);
  double theta = 1.0 / (1.0 + dt * cfg.visc.d_space / g.jacobian());
  for (int c = 0; c < 8; ++c) {
    double avg = cell_average(b, u, c);
    for (int i = 0; i < 4; ++i) {
      double utilde = uold(c, i) - dt / (g.jacobian() * b.weights(i)) * r(c, i);
      CHECK(u(c, i) == doctest::Approx((1.0 - theta) * avg + theta * utilde)
                           .epsilon(1e-9)
                           .scale(1.0));
    }
  }
}

TEST_CASE("space-time time term: constants, q=1 hand formula, telescoping") {
  auto bq = build_basis<double>(1);
  auto p = make_problem(1);
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.visc.mode = ViscosityMode::none;

  SlabState slab;
  slab.dt = 0.1;
  slab.prev = Field::Constant(2, 3, 0.7);
  slab.levels = {Field::Constant(2, 3, 0.7), Field::Constant(2, 3, 0.7)};
  auto t = st_time_term(bq, cfg, slab);
  CHECK(t[0].cwiseAbs().maxCoeff() < 1e-15);
  CHECK(t[1].cwiseAbs().maxCoeff() < 1e-15);

  // q=1, values (a, b), prev = a: both components equal (b-a)/2
  double a = 0.3, bb = 1.1;
  slab.prev = Field::Constant(1, 1, a);
  slab.levels = {Field::Constant(1, 1, a), Field::Constant(1, 1, bb)};
  t = st_time_term(bq, cfg, slab);
  CHECK(t[0](0, 0) == doctest::Approx(0.5 * (bb - a)).epsilon(1e-14));
  CHECK(t[1](0, 0) == doctest::Approx(0.5 * (bb - a)).epsilon(1e-14));

  // telescoping: sum_r T^r = U^q - U_prev for random slabs, any q
  auto bq3 = build_basis<double>(3);
  SlabState s3;
  s3.dt = 0.1;
  s3.prev = random_field(3, 4, -1.0, 1.0, 41);
  for (int r = 0; r <= 3; ++r) s3.levels.push_back(random_field(3, 4, -1.0, 1.0, 50 + r));
  cfg.visc.mode = ViscosityMode::full;
  cfg.visc.d_time = 3.7;
  auto t3 = st_time_term(bq3, cfg, s3);
  Field total = Field::Zero(3, 4);
  for (auto& tr : t3) total += tr;
  CHECK((total - (s3.levels[3] - s3.prev)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time-term entropy chain: sum_r v^r T^r bounds the endpoint difference") {
  auto bq = build_basis<double>(3);
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.visc.mode = ViscosityMode::none;  // d_n = 0: the pure EC upwind chain
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    SlabState s;
    s.dt = 0.1;
    s.prev = Field::Constant(1, 1, unif(rng));
    for (int r = 0; r <= 3; ++r) s.levels.push_back(Field::Constant(1, 1, unif(rng)));
    auto t = st_time_term(bq, cfg, s);
    double chain = 0.0;
    for (int r = 0; r <= 3; ++r) chain += cfg.ec.v(s.levels[r](0, 0)) * t[r](0, 0);
    double endpoint = cfg.ec.theta(s.levels[3](0, 0)) - cfg.ec.theta(s.prev(0, 0));
    CHECK(chain >= endpoint - 1e-12);
  }
}

TEST_CASE("space-time residual: constants and slab average identity") {
  auto bp = build_basis<double>(3);
  auto bq = build_basis<double>(3);
  auto p = make_problem(1);
  auto g = make_grid(5, p);
  auto cfg = basic_config(p, bp, &bq, ViscosityMode::full);

  SlabState slab;
  slab.dt = 0.02;
  slab.prev = Field::Constant(5, 4, -0.2);
  for (int r = 0; r <= 3; ++r) slab.levels.push_back(Field::Constant(5, 4, -0.2));
  auto f = st_residual(g, bp, bq, p, cfg, slab);
  for (auto& fr : f) CHECK(fr.cwiseAbs().maxCoeff() < 1e-13);

  // random slab: summing the residual over (i, r) reproduces the slab
  // cell-average identity
  SlabState s;
  s.dt = 0.025;
  s.prev = random_field(5, 4, -1.0, 1.0, 71);
  for (int r = 0; r <= 3; ++r) s.levels.push_back(random_field(5, 4, -1.0, 1.0, 80 + r));
  auto fr = st_residual(g, bp, bq, p, cfg, s);
  for (int c = 0; c < 5; ++c) {
    double fluxsum = 0.0;
    for (int r = 0; r <= 3; ++r) {
      const Field& ur = s.levels[r];
      double hr = interface_flux(p, cfg.flux, ur(c, 3), neighbor_trace(g, ur, c, Side::right), 1.0);
      double hl = -interface_flux(p, cfg.flux, ur(c, 0), neighbor_trace(g, ur, c, Side::left), -1.0);
      fluxsum += 0.5 * bq.weights(r) * (hr - hl);
    }
    double ressum = 0.0;
    for (int r = 0; r <= 3; ++r) ressum += fr[r].row(c).sum();
    double lhs = cell_average(bp, s.levels[3], c);
    double rhs = cell_average(bp, s.prev, c) - s.dt / g.cell_measure() * fluxsum +
                 ressum / g.cell_measure();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11).scale(1.0));
  }
}
