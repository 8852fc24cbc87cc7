#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <string>

#include "idgsem/checks.hpp"
#include "idgsem/csv.hpp"
#include "idgsem/reference.hpp"
#include "idgsem/verify.hpp"

namespace {

using namespace idgsem;

void write_solution_csv(const std::string& path, const RunReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const Basis b = build_basis<double>(rep.p);
  const Basis bq = build_basis<double>(std::max(1, rep.q));
  out << "x,t,u,cell,node\n";
  auto emit = [&](const Field& f, double t) {
    for (int c = 0; c < rep.grid.n_cells; ++c)
      for (int i = 0; i <= rep.p; ++i)
        out << format_g17(node_position(rep.grid, b, c, i)) << ',' << format_g17(t) << ','
            << format_g17(f(c, i)) << ',' << c << ',' << i << '\n';
  };
  if (rep.steps.empty()) {
    emit(rep.initial, 0.0);
    return;
  }
  const StepRecord& last = rep.steps.back();
  if (rep.scheme == SchemeKind::backward_euler) {
    emit(last.levels.back(), last.t);
  } else {
    double t_begin = last.t - last.dt;
    for (int r = 0; r <= rep.q; ++r)
      emit(last.levels[r], t_begin + 0.5 * last.dt * (1.0 + bq.nodes(r)));
  }
}

void write_diagnostics_csv(const std::string& path, const RunReport& rep, const Problem& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,t,dt,umin,umax,mass,solver_iters,entropy_defect_sq,entropy_defect_k0\n";
  for (const auto& d : step_diagnostics(rep, p))
    out << d.step << ',' << format_g17(d.t) << ',' << format_g17(d.dt) << ','
        << format_g17(d.u_min) << ',' << format_g17(d.u_max) << ',' << format_g17(d.mass) << ','
        << d.solver_iters << ',' << format_g17(d.entropy_defect_sq) << ','
        << format_g17(d.entropy_defect_k0) << '\n';
}

int do_run(int problem, const std::string& scheme_name, int p_deg, int q_deg, int cells,
           double cfl, const std::string& visc_name, const std::string& flux_name,
           const std::string& out_prefix, bool strict) {
  Problem prob = make_problem(problem);

  RunConfig rc;
  bool steady = prob.steady;
  std::string scheme = scheme_name;
  if (scheme.empty()) scheme = steady ? "be" : "st";
  rc.scheme = scheme == "be" ? SchemeKind::backward_euler : SchemeKind::space_time;
  rc.p = p_deg;
  rc.q = q_deg;
  rc.n_cells = cells;
  rc.cfl = cfl > 0.0 ? cfl : (steady ? 1000.0 : 1.0);
  rc.viscosity = visc_name == "none"
                     ? ViscosityMode::none
                     : visc_name == "adaptive" ? ViscosityMode::adaptive : ViscosityMode::full;
  rc.flux = flux_name == "rusanov" ? FluxKind::rusanov : FluxKind::godunov;

  RunReport rep = advance(prob, rc);
  write_solution_csv(out_prefix + "_solution.csv", rep);
  write_diagnostics_csv(out_prefix + "_diagnostics.csv", rep, prob);

  if (rep.failed) {
    std::fprintf(stderr, "solver failure: %s\n", rep.failure.c_str());
    return 2;
  }
  std::printf("problem %d: %zu steps, final t = %s\n", problem, rep.steps.size(),
              format_g17(rep.steps.empty() ? 0.0 : rep.steps.back().t).c_str());

  if (strict) {
    bool ok = true;
    bool periodic = prob.bc.kind == BoundaryCondition::Kind::periodic;
    auto cons = check_conservation(rep, prob, periodic ? 1e-10 : 1e-9);
    std::printf("CHECK conservation %s %s\n", cons.pass ? "PASS" : "FAIL",
                format_g17(cons.worst).c_str());
    ok = ok && cons.pass;
    if (rc.viscosity == ViscosityMode::full) {
      auto mpp = check_mpp(rep, prob.lower, prob.upper, 1e-9);
      std::printf("CHECK mpp %s %s\n", mpp.pass ? "PASS" : "FAIL", format_g17(mpp.worst).c_str());
      ok = ok && mpp.pass;
      auto ent = check_entropy_cells(rep, prob, square_entropy(prob), 1e-9);
      std::printf("CHECK entropy_sq %s %s\n", ent.pass ? "PASS" : "FAIL",
                  format_g17(ent.worst).c_str());
      ok = ok && ent.pass;
    }
    if (!ok) return 3;
  }
  return 0;
}

int do_verify(const CheckContext& ctx, const std::string& only) {
  bool all_pass = true;
  auto report = [&](const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
      std::printf("CHECK %s %s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                  format_g17(r.worst).c_str());
      all_pass = all_pass && r.pass;
    }
  };
  report(property_checks(ctx, only));
  report(catalog_run_checks(ctx, only));
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit DGSEM solver for 1D scalar conservation laws"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "march one catalog problem and write CSV outputs");
  int problem = 1;
  std::string scheme;
  int p_deg = 3, q_deg = 3, cells = 40;
  double cfl = -1.0;
  std::string visc = "full", flux = "godunov", out_prefix = "run";
  bool strict = false;
  run->add_option("--problem", problem, "catalog problem id (1-5)")
      ->required()
      ->check(CLI::Range(1, 5));
  run->add_option("--scheme", scheme, "be | st (default: st, or be for the steady problem)")
      ->check(CLI::IsMember({"be", "st"}));
  run->add_option("--p", p_deg, "space polynomial degree")->check(CLI::Range(1, 12));
  run->add_option("--q", q_deg, "time polynomial degree (space-time scheme)")
      ->check(CLI::Range(1, 12));
  run->add_option("--cells", cells, "number of mesh cells")->check(CLI::Range(1, 1000000));
  run->add_option("--cfl", cfl, "CFL number (default 1, or 1000 for the steady problem)");
  run->add_option("--viscosity", visc, "none | full | adaptive")
      ->check(CLI::IsMember({"none", "full", "adaptive"}));
  run->add_option("--flux", flux, "interface flux: godunov | rusanov")
      ->check(CLI::IsMember({"godunov", "rusanov"}));
  run->add_option("--out", out_prefix,
                  "output prefix for <prefix>_solution.csv and <prefix>_diagnostics.csv");
  run->add_flag("--strict", strict, "exit 3 when a verification check fails");

  auto* verify = app.add_subcommand("verify", "run the property suite and the catalog runs");
  std::string only, fault;
  verify->add_option("--only", only, "substring filter on check names");
  verify->add_option("--inject-fault", fault, "testing hook: 'sbp' corrupts the derivative matrix")
      ->check(CLI::IsMember({"sbp"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message and usage
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return do_run(problem, scheme, p_deg, q_deg, cells, cfl, visc, flux, out_prefix, strict);
    idgsem::CheckContext ctx;
    ctx.corrupt_sbp = fault == "sbp";
    return do_verify(ctx, only);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
