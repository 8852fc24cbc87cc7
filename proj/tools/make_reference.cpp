// Regenerates the golden finite-volume reference profiles under
// tests/data/refs_v1. These are first-order Godunov marches at CFL 0.45 on
// 100000 cells, which is slow; the results are committed so the test suite
// only reads them.
#include <CLI11.hpp>
#include <cstdio>

#include "idgsem/csv.hpp"
#include "idgsem/reference.hpp"

int main(int argc, char** argv) {
  CLI::App app{"golden reference profile generator"};
  int problem = 1;
  int cells = 100000;
  double time = -1.0;  // default: the problem's final time
  std::string out;
  app.add_option("--problem", problem, "catalog problem id (1-5)")->required();
  app.add_option("--cells", cells, "fine grid resolution");
  app.add_option("--time", time, "override the final time");
  app.add_option("--out", out, "output CSV path")->required();
  CLI11_PARSE(app, argc, argv);

  auto p = idgsem::make_problem(problem);
  double t = time >= 0.0 ? time : p.final_time;
  bool steady = p.steady;
  if (steady && time < 0.0) t = 3.0;  // cap for the steady march
  std::printf("problem %d: marching %d cells to t=%g%s\n", problem, cells, t,
              steady ? " (steady)" : "");
  auto prof = idgsem::fv_oracle(p, cells, t, steady);
  idgsem::save_profile_csv(out, prof);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}
