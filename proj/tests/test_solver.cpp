#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>

#include "idgsem/solver.hpp"
#include "support.hpp"

using namespace idgsem;
using namespace idgsem::testing;

namespace {

SchemeConfig full_config(const Problem& p, const Basis& bp, const Basis* bq) {
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.flux = FluxKind::godunov;
  cfg.visc = make_viscosity(ViscosityMode::full, bp, bq, p, true);
  return cfg;
}

}  // namespace

TEST_CASE("picard subiteration: constants are fixed points") {
  auto p = make_problem(1);
  auto b = build_basis<double>(3);
  auto g = make_grid(8, p);
  auto cfg = full_config(p, b, nullptr);
  Field c = Field::Constant(8, 4, 0.35);
  Field next = picard_step_be(g, b, p, cfg, c, c, 0.025);
  CHECK((next - c).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("picard subiteration stays inside the invariant interval") {
  for (int id : {1, 4}) {
    CAPTURE(id);
    auto p = make_problem(id);
    auto bp = build_basis<double>(3);
    auto bq = build_basis<double>(3);
    auto g = make_grid(6, p);
    auto cfg = full_config(p, bp, &bq);
    double dt = g.dx() / max_wave_speed(p, p.lower, p.upper);
    for (int trial = 0; trial < 500; ++trial) {
      Field uold = random_field(6, 4, p.lower, p.upper, 1000 + trial);
      Field guess = random_field(6, 4, p.lower, p.upper, 5000 + trial);
      Field next = picard_step_be(g, bp, p, cfg, uold, guess, dt);
      CHECK(next.minCoeff() >= p.lower - 1e-12);
      CHECK(next.maxCoeff() <= p.upper + 1e-12);
    }
    for (int trial = 0; trial < 100; ++trial) {
      SlabState slab;
      slab.dt = dt;
      slab.prev = random_field(6, 4, p.lower, p.upper, 2000 + trial);
      for (int r = 0; r <= 3; ++r)
        slab.levels.push_back(random_field(6, 4, p.lower, p.upper, 3000 + 7 * trial + r));
      SlabState next = picard_step_st(g, bp, bq, p, cfg, slab);
      for (auto& lvl : next.levels) {
        CHECK(lvl.minCoeff() >= p.lower - 1e-12);
        CHECK(lvl.maxCoeff() <= p.upper + 1e-12);
      }
    }
  }
}

TEST_CASE("picard requires full viscosity") {
  auto p = make_problem(1);
  auto b = build_basis<double>(2);
  auto g = make_grid(4, p);
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.visc.mode = ViscosityMode::none;
  Field c = Field::Constant(4, 3, 0.0);
  CHECK_THROWS(picard_step_be(g, b, p, cfg, c, c, 0.01));
}

TEST_CASE("newton solves linear advection in one iteration, matching the dense solve") {
  auto p = linear_advection();
  auto b = build_basis<double>(2);
  auto g = make_grid(4, p);
  SchemeConfig cfg;
  cfg.ec = square_ec();
  cfg.flux = FluxKind::godunov;
  cfg.visc.mode = ViscosityMode::none;
  double dt = 0.05;
  Field uold = random_field(4, 3, -1.0, 1.0, 77);

  mat A = advection_residual_matrix(g, b);
  vec mass(12);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 3; ++i) mass(c * 3 + i) = b.weights(i) * g.jacobian();
  mat sys = mass.asDiagonal();
  sys /= dt;
  sys += A;
  vec oracle = sys.fullPivLu().solve(mass.cwiseProduct(flatten(uold)) / dt);

  Field u = uold;
  SolverConfig sc;
  auto res = solve_be_newton(g, b, p, cfg, u, uold, dt, sc);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);  // one solve plus at most one polish
  CHECK((flatten(u) - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jacobians agree with central finite differences") {
  auto p = make_problem(1);
  auto b = build_basis<double>(3);
  auto g = make_grid(4, p);
  auto cfg = full_config(p, b, nullptr);
  // smooth upwind regime keeps the Godunov flux away from its kinks
  Field u = random_field(4, 4, 0.2, 0.9, 11);
  double dt = 0.02;
  mat jac = mat(be_jacobian(g, b, p, cfg, u, dt));
  const double h = 1e-7;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i) {
      Field up = u, um = u;
      up(c, i) += h;
      um(c, i) -= h;
      Field fp = be_residual(g, b, p, cfg, up, u, dt);
      Field fm = be_residual(g, b, p, cfg, um, u, dt);
      int col = c * 4 + i;
      int k = 0;
      for (int cc = 0; cc < 4; ++cc)
        for (int ii = 0; ii < 4; ++ii) {
          double fd = (fp(cc, ii) - fm(cc, ii)) / (2.0 * h);
          CHECK(jac(k, col) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
          ++k;
        }
    }
}

TEST_CASE("newton residual decreases superlinearly on a problem-1 step") {
  auto p = make_problem(1);
  auto b = build_basis<double>(3);
  auto g = make_grid(40, p);
  auto cfg = full_config(p, b, nullptr);
  double dt = g.dx() / max_wave_speed(p, p.lower, p.upper);
  Field uold = project_initial(g, b, p);
  Field u = uold;

  std::vector<double> norms;
  norms.push_back(be_residual(g, b, p, cfg, u, uold, dt).cwiseAbs().maxCoeff());
  for (int it = 0; it < 6; ++it) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(be_jacobian(g, b, p, cfg, u, dt));
    REQUIRE(lu.info() == Eigen::Success);
    vec f = flatten(be_residual(g, b, p, cfg, u, uold, dt));
    vec delta = lu.solve(f);
    int k = 0;
    for (int c = 0; c < 40; ++c)
      for (int i = 0; i < 4; ++i) u(c, i) -= delta(k++);
    norms.push_back(be_residual(g, b, p, cfg, u, uold, dt).cwiseAbs().maxCoeff());
    if (norms.back() < 1e-13) break;
  }
  // contraction factors shrink as the root is approached
  REQUIRE(norms.size() >= 3);
  double rate1 = norms[1] / norms[0];
  double rate_last = norms[norms.size() - 1] / norms[norms.size() - 2];
  CHECK(norms.back() < 1e-12);
  CHECK(rate_last < 0.2 * rate1);
}

TEST_CASE("picard and newton find the same root") {
  auto p = make_problem(4);
  auto bp = build_basis<double>(2);
  auto bq = build_basis<double>(2);
  auto g = make_grid(10, p);
  auto cfg = full_config(p, bp, &bq);
  double dt = g.dx() / max_wave_speed(p, p.lower, p.upper);
  Field uold = project_initial(g, bp, p);
  SolverConfig sc;
  sc.max_picard = 30000;

  Field up = uold;
  auto rp = solve_be_picard(g, bp, p, cfg, up, uold, dt, sc);
  Field un = uold;
  auto rn = solve_be_newton(g, bp, p, cfg, un, uold, dt, sc);
  REQUIRE(rp.converged);
  REQUIRE(rn.converged);
  CHECK((up - un).cwiseAbs().maxCoeff() < 1e-8);

  SlabState sl1;
  sl1.dt = dt;
  sl1.prev = uold;
  sl1.levels.assign(3, uold);
  SlabState sl2 = sl1;
  auto rps = solve_st_picard(g, bp, bq, p, cfg, sl1, sc);
  auto rns = solve_st_newton(g, bp, bq, p, cfg, sl2, sc);
  REQUIRE(rps.converged);
  REQUIRE(rns.converged);
  for (int r = 0; r < 3; ++r)
    CHECK((sl1.levels[r] - sl2.levels[r]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("advance follows the CFL rule and hits the final time") {
  auto p = make_problem(1);
  RunConfig rc;
  rc.scheme = SchemeKind::space_time;
  rc.n_cells = 40;
  rc.cfl = 1.0;
  rc.viscosity = ViscosityMode::full;
  auto rep = advance(p, rc);
  REQUIRE(!rep.failed);
  CHECK(rep.steps.size() == 16);  // dt = (1/40)/1, T = 0.4
  CHECK(rep.steps.front().dt == doctest::Approx(1.0 / 40.0).epsilon(1e-14));
  CHECK(rep.steps.back().t == doctest::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("advance reaches the steady state of problem 2") {
  auto p = make_problem(2);
  RunConfig rc;
  rc.scheme = SchemeKind::backward_euler;
  rc.n_cells = 40;
  rc.cfl = 1000.0;
  rc.viscosity = ViscosityMode::full;
  auto rep = advance(p, rc);
  REQUIRE(!rep.failed);
  CHECK(rep.steps.front().dt == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(rep.steps.size() < 200);
  const Field& uf = rep.final_field();
  auto g = rep.grid;
  auto b = build_basis<double>(rep.p);
  for (int c = 0; c < g.n_cells; ++c)
    for (int i = 0; i <= rep.p; ++i) {
      double x = node_position(g, b, c, i);
      if (x < 0.5 - g.dx()) CHECK(uf(c, i) == doctest::Approx(1.0).epsilon(1e-6));
      if (x > 0.5 + g.dx()) CHECK(uf(c, i) == doctest::Approx(-1.0).epsilon(1e-6));
    }
}

TEST_CASE("zero-duration run returns the projection of the initial datum") {
  auto p = make_problem(1);
  RunConfig rc;
  rc.final_time_override = 0.0;
  auto rep = advance(p, rc);
  CHECK(rep.steps.empty());
  auto b = build_basis<double>(3);
  auto g = make_grid(40, p);
  CHECK((rep.final_field() - project_initial(g, b, p)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("space-time advance rejects q = 0") {
  auto p = make_problem(1);
  RunConfig rc;
  rc.scheme = SchemeKind::space_time;
  rc.q = 0;
  CHECK_THROWS(advance(p, rc));
}
