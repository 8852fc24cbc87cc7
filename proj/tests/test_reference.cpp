#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "idgsem/csv.hpp"
#include "idgsem/reference.hpp"

using namespace idgsem;

namespace {

double l1_against_profile(const Problem& p, const FvProfile& prof, double t,
                          double (*ref)(const Problem&, double, double)) {
  double err = 0.0;
  for (Eigen::Index j = 0; j < prof.x.size(); ++j)
    err += std::abs(prof.u(j) - ref(p, prof.x(j), t)) * prof.dx();
  return err;
}

}  // namespace

TEST_CASE("characteristics reduce to the initial datum at t = 0") {
  auto p1 = make_problem(1);
  auto p3 = make_problem(3);
  for (int i = 0; i <= 50; ++i) {
    double x = i / 50.0;
    CHECK(burgers_characteristics(p1, x, 0.0) == doctest::Approx(p1.initial(x)).epsilon(1e-14));
    CHECK(burgers_characteristics(p3, x, 0.0) == doctest::Approx(p3.initial(x)).epsilon(1e-14));
  }
}

TEST_CASE("pre-shock characteristics match the finite-volume oracle") {
  auto p = make_problem(1);
  auto prof = fv_oracle(p, 20000, 0.1);
  double err = l1_against_profile(p, prof, 0.1, burgers_characteristics);
  CHECK(err < 5e-4);
  // spot value away from the extremes
  double u = burgers_characteristics(p, 0.25, 0.1);
  CHECK(std::abs(u - prof.eval(0.25)) < 2e-3);
}

TEST_CASE("post-shock solution is antisymmetric with a stationary shock") {
  auto p = make_problem(1);
  double t = 0.4;
  for (double x : {0.1, 0.3, 0.45, 0.49}) {
    double ul = burgers_characteristics(p, x, t);
    double ur = burgers_characteristics(p, 1.0 - x, t);
    CHECK(ul == doctest::Approx(-ur).epsilon(1e-12).scale(1.0));
    CHECK(ul > 0.0);
  }
  double jump_l = burgers_characteristics(p, 0.5 - 1e-9, t);
  double jump_r = burgers_characteristics(p, 0.5 + 1e-9, t);
  CHECK(jump_l > 0.2);
  CHECK(jump_l == doctest::Approx(-jump_r).epsilon(1e-6));
  // against the oracle at the final time
  auto prof = fv_oracle(p, 20000, t);
  CHECK(l1_against_profile(p, prof, t, burgers_characteristics) < 5e-4);
}

TEST_CASE("problem 3 is problem 1 in a unit-speed frame") {
  auto p = make_problem(3);
  double t = 3.0 / (4.0 * 3.14159265358979323846);
  auto prof = fv_oracle(p, 20000, t);
  CHECK(l1_against_profile(p, prof, t, burgers_characteristics) < 8e-4);
}

TEST_CASE("riemann_selfsim basics") {
  auto p = make_problem(1);
  CHECK(riemann_selfsim(p, 0.7, 0.7, -0.3) == 0.7);
  // stationary shock: equal fluxes, Rankine-Hugoniot speed zero
  CHECK(riemann_selfsim(p, 1.0, -1.0, -0.01) == doctest::Approx(1.0));
  CHECK(riemann_selfsim(p, 1.0, -1.0, 0.01) == doctest::Approx(-1.0));
  // rarefaction: u = xi inside the fan
  CHECK(riemann_selfsim(p, -1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(riemann_selfsim(p, -1.0, 1.0, -2.0) == doctest::Approx(-1.0));
  CHECK(riemann_selfsim(p, -1.0, 1.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("riemann_selfsim captures the nonconvex compound waves") {
  auto p4 = make_problem(4);
  double t = 0.2;
  auto prof = fv_oracle(p4, 20000, t);
  double err = 0.0;
  for (Eigen::Index j = 0; j < prof.x.size(); ++j)
    err += std::abs(prof.u(j) - riemann_selfsim(p4, 1.0, 0.0, (prof.x(j) - 0.5) / t)) * prof.dx();
  CHECK(err < 5e-3);

  auto p5 = make_problem(5);
  t = 0.15;  // fan still inside the unit domain
  auto prof5 = fv_oracle(p5, 20000, t);
  err = 0.0;
  for (Eigen::Index j = 0; j < prof5.x.size(); ++j)
    err +=
        std::abs(prof5.u(j) - riemann_selfsim(p5, -3.0, 3.0, (prof5.x(j) - 0.5) / t)) * prof5.dx();
  CHECK(err < 2e-2);
}

TEST_CASE("fv_oracle is maximum-principle-preserving and exact on constants") {
  auto p = make_problem(1);
  auto pc = p;
  pc.initial = [](double) { return 0.25; };
  auto prof = fv_oracle(pc, 10000, 0.3);
  CHECK(prof.u.minCoeff() == 0.25);
  CHECK(prof.u.maxCoeff() == 0.25);
}

TEST_CASE("fv_oracle marches problem 2 to the standing shock") {
  auto p = make_problem(2);
  auto prof = fv_oracle(p, 10000, 3.0, /*steady=*/true);
  // sharp shock within one fine cell of x = 0.5
  for (Eigen::Index j = 0; j < prof.x.size(); ++j) {
    if (prof.x(j) < 0.5 - prof.dx()) CHECK(prof.u(j) == doctest::Approx(1.0).epsilon(1e-10));
    if (prof.x(j) > 0.5 + prof.dx()) CHECK(prof.u(j) == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("profile csv round trip") {
  auto p = make_problem(4);
  auto prof = fv_oracle(p, 10000, 0.02);
  std::string path = "test_profile_roundtrip.csv";
  save_profile_csv(path, prof);
  auto back = load_profile_csv(path);
  CHECK_THROWS(fv_oracle(p, 500, 0.05));
  REQUIRE(back.x.size() == prof.x.size());
  CHECK((back.x - prof.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.u - prof.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.x_left == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(back.x_right == doctest::Approx(1.0).epsilon(1e-14));
  std::remove(path.c_str());
}
