#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "nematoplate/config.hpp"
#include "nematoplate/io.hpp"
#include "nematoplate/limit3d.hpp"
#include "nematoplate/microlam.hpp"
#include "nematoplate/runtime.hpp"
#include "nematoplate/solver.hpp"

namespace np = nematoplate;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

using Report = std::vector<std::pair<std::string, std::string>>;

void put(Report& rep, const std::string& key, double v) {
  rep.emplace_back(key, np::format_g17(v));
}

void put(Report& rep, const std::string& key, const std::string& v) {
  rep.emplace_back(key, v);
}

void add_breakdown(Report& rep, const np::EnergyBreakdown& bd) {
  put(rep, "film_membrane", bd.film_membrane);
  put(rep, "film_cross", bd.film_cross);
  put(rep, "film_bending", bd.film_bending);
  put(rep, "film_trace", bd.film_trace);
  put(rep, "foundation", bd.foundation);
  put(rep, "electrostatic", bd.electrostatic);
  put(rep, "load_work", bd.load_work);
  put(rep, "total", bd.total);
}

void add_solve(Report& rep, const np::SolveReport& sr) {
  put(rep, "iterations", static_cast<double>(sr.iterations));
  put(rep, "grad_norm", sr.grad_norm);
  put(rep, "wall_time_s", sr.wall_time_s);
  bool monotone = true;
  for (std::size_t k = 1; k < sr.energy_trace.size(); ++k)
    if (sr.energy_trace[k] > sr.energy_trace[k - 1] + 1e-12) monotone = false;
  put(rep, "energy_trace_monotone", monotone ? std::string("true") : std::string("false"));
}

void emit_outputs(const np::RunConfig& c, const np::PlateState& ps,
                  const np::ScalarField2* phi, const Report& rep) {
  if (!c.out_fields.empty()) np::write_fields_csv(c.out_fields, ps, phi);
  if (!c.out_vtk.empty()) np::write_vtk(c.out_vtk, ps, phi);
  if (!c.out_report.empty()) np::write_report(c.out_report, rep);
  for (const auto& [k, v] : rep) std::cout << k << " = " << v << "\n";
}

int run_actuate(const np::RunConfig& c) {
  const np::QTensor qbar = c.qtensor();
  std::optional<np::Phi0Spec> phi0;
  if (c.phi_enabled) phi0 = np::Phi0Spec{c.phi_a0, c.phi_lin};
  const np::ActuationSolution sol = np::minimize_actuation(
      qbar, c.bc, c.material, c.dielectric, c.regime(np::Flavor::actuation), c.grid, phi0);

  Report rep;
  put(rep, "mode", std::string("actuate"));
  put(rep, "representation",
      sol.state.rep == np::Representation::interface ? std::string("interface")
                                                     : std::string("midsection"));
  add_breakdown(rep, sol.report.at_opt);
  add_solve(rep, sol.report);
  put(rep, "max_abs_zeta3", sol.state.zeta3.v.cwiseAbs().maxCoeff());
  const double sym = np::reflection_residual_y(sol.state);
  put(rep, "reflection_residual_y", sym);
  emit_outputs(c, sol.state, c.phi_enabled ? &sol.phi : nullptr, rep);
  return 0;
}

int run_minmax(const np::RunConfig& c) {
  np::QParametrization qp;
  qp.set = c.qset;
  np::Phi0Spec phi0{c.phi_a0, c.phi_lin};
  const np::MinMaxSolution sol =
      np::solve_minmax(c.bc, phi0, qp, c.material, c.dielectric,
                       c.regime(np::Flavor::actuation), c.grid, c.starts, c.seed);

  Report rep;
  put(rep, "mode", std::string("minmax"));
  put(rep, "qset", c.qset == np::QParametrization::Set::frank
                       ? std::string("frank")
                       : (c.qset == np::QParametrization::Set::uniaxial
                              ? std::string("uniaxial")
                              : std::string("biaxial")));
  add_breakdown(rep, sol.report.at_opt);
  add_solve(rep, sol.report);
  put(rep, "q_xx", sol.qbar.xx);
  put(rep, "q_yy", sol.qbar.yy);
  put(rep, "q_zz", sol.qbar.zz);
  put(rep, "q_xy", sol.qbar.xy);
  put(rep, "q_xz", sol.qbar.xz);
  put(rep, "q_yz", sol.qbar.yz);
  for (std::size_t b = 0; b < std::min<std::size_t>(2, sol.basins.size()); ++b)
    put(rep, "basin" + std::to_string(b) + "_energy", sol.basins[b].energy);
  emit_outputs(c, sol.state, c.phi_enabled ? &sol.phi : nullptr, rep);
  return 0;
}

int run_relax(const np::RunConfig& c) {
  np::Loads loads = np::Loads::zero(c.grid);
  for (int k = 0; k < c.grid.n(); ++k) {
    loads.fprime.u1(k) = c.f1;
    loads.fprime.u2(k) = c.f2;
    loads.f3.v[k] = c.f3;
  }
  const np::RelaxedSolution sol = np::minimize_relaxed(
      c.bc, loads, c.material, c.regime(np::Flavor::relaxation), c.grid);

  Report rep;
  put(rep, "mode", std::string("relax"));
  put(rep, "representation",
      sol.state.rep == np::Representation::interface ? std::string("interface")
                                                     : std::string("midsection"));
  add_breakdown(rep, sol.report.at_opt);
  add_solve(rep, sol.report);
  emit_outputs(c, sol.state, nullptr, rep);
  return 0;
}

int run_gamma(const np::RunConfig& c) {
  Report rep;
  put(rep, "mode", std::string("gamma-check"));

  // Smooth polynomial test state: quadratic deflection (where the recovery
  // profile is operator-exact) and a cubic-in-plane component.
  np::PlateState zeta = np::PlateState::zero(c.grid);
  for (int j = 0; j < c.grid.ny; ++j)
    for (int i = 0; i < c.grid.nx; ++i) {
      const int k = c.grid.idx(i, j);
      const double x = c.grid.x(i), y = c.grid.y(j);
      zeta.zeta3.v[k] = 0.2 * (x * x - 0.5 * x * y);
      zeta.zeta_prime.u1(k) = 0.1 * x * x * y;
      zeta.zeta_prime.u2(k) = 0.05 * y * y;
    }

  if (c.gamma_check == "film" || c.gamma_check == "all") {
    const np::PlateOps ops = np::PlateOps::make(c.grid, np::BoundarySpec::all_free());
    const double j2 = np::film_energy(zeta, c.material, ops).value;
    std::cout << "# film recovery: eps j3d j2d gap\n";
    int idx = 0;
    for (double eps : c.gamma_eps) {
      const np::Field3 f = np::recovery_film(zeta, eps, c.material, c.gamma_nz);
      const double j3 =
          np::assemble_j3d(c.p, eps, f, c.material, c.dielectric, 0.0).film;
      const double gap = j3 - j2;
      std::cout << np::format_g17(eps) << ' ' << np::format_g17(j3) << ' '
                << np::format_g17(j2) << ' ' << np::format_g17(gap) << "\n";
      put(rep, "film_gap_" + std::to_string(idx), gap);
      ++idx;
    }
  }

  if (c.gamma_check == "work" || c.gamma_check == "all") {
    const np::QTensor qbar = c.qtensor();
    const np::Mat2 b = np::schur_B(np::d_tensor(qbar, c.dielectric));
    np::GaussProblem gp;
    gp.B = b;
    gp.phi0_const = c.phi_a0;
    gp.phi0_lin = c.phi_lin;
    gp.bc = c.bc;
    const np::ScalarField2 phi2 = np::solve_gauss(gp, c.grid);
    const double w2 = np::electrostatic_work(phi2, b);
    std::cout << "# electrostatic reduction: eps work3d work2d gap\n";
    int idx = 0;
    for (double eps : c.gamma_eps) {
      const np::Grid3 bond = np::Grid3::bonding(c.grid, c.gamma_nz);
      const auto qfield = [&](const np::Vec3&) { return qbar; };
      const np::Gauss3Result g3 = np::gauss3d_desk(c.p, eps, bond, qfield, c.dielectric,
                                                   c.phi_a0, c.phi_lin, c.bc);
      const double gap = g3.work - w2;
      std::cout << np::format_g17(eps) << ' ' << np::format_g17(g3.work) << ' '
                << np::format_g17(w2) << ' ' << np::format_g17(gap) << "\n";
      put(rep, "work_gap_" + std::to_string(idx), gap);
      ++idx;
    }
  }

  if (c.gamma_check == "combined" || c.gamma_check == "all") {
    const np::Vec3 n1 = np::Vec3::UnitX();
    const np::Vec3 n2 = np::Vec3::UnitY();
    const auto rows = np::upper_bound_trend(zeta, n1, n2, 0.5, c.gamma_eps, c.material,
                                            c.p, np::UpperBoundKnobs{});
    std::cout << "# combined upper bound: eps j3d j2d gap\n";
    int idx = 0;
    for (const auto& row : rows) {
      std::cout << np::format_g17(row.eps) << ' ' << np::format_g17(row.j3d) << ' '
                << np::format_g17(row.j2d) << ' ' << np::format_g17(row.gap) << "\n";
      put(rep, "combined_gap_" + std::to_string(idx), row.gap);
      ++idx;
    }
  }

  if (!c.out_report.empty()) np::write_report(c.out_report, rep);
  return 0;
}

int run_laminate(const np::RunConfig& c) {
  const np::QTensor qbar = c.qtensor();
  const np::LaminateField lf = np::laminate_profile(qbar, c.lam_eta, c.lam_normal);
  const double avg_err = std::sqrt((lf.average() - qbar).norm2());
  const np::WeakConvergenceReport wc = np::weak_convergence_check(lf, qbar);
  const np::MollifiedLaminate ml = np::mollify_laminate(lf, c.lam_delta);

  Report rep;
  put(rep, "mode", std::string("laminate-check"));
  put(rep, "stripes", static_cast<double>(lf.stripes.size()));
  put(rep, "average_error", avg_err);
  put(rep, "weak_rate", wc.fitted_rate);
  put(rep, "transition_fraction", ml.transition_fraction());
  put(rep, "curvature_integral", ml.curvature_integral());
  if (lf.stripes.size() >= 2) {
    const np::TwoVariantDisplacement tv = np::two_variant_displacement(
        lf.stripes[0].director, lf.stripes[1].director, lf.stripes[0].fraction, c.lam_eta);
    if (!tv.degenerate) {
      const np::Mat3 jump = tv.gradient_in(1) - tv.gradient_in(2);
      const Eigen::JacobiSVD<np::Mat3> svd(jump);
      put(rep, "jump_second_singular", svd.singularValues()(1));
    }
  }
  if (!c.out_report.empty()) np::write_report(c.out_report, rep);
  for (const auto& [k, v] : rep) std::cout << k << " = " << v << "\n";
  return 0;
}

int run_gauss_demo(const np::RunConfig& c) {
  const np::QTensor qbar = c.qtensor();
  const np::Mat2 b = np::schur_B(np::d_tensor(qbar, c.dielectric));
  np::GaussProblem gp;
  gp.B = b;
  gp.phi0_const = c.phi_a0;
  gp.phi0_lin = c.phi_lin;
  gp.bc = c.bc;
  np::GaussStats stats;
  const np::ScalarField2 phi = np::solve_gauss(gp, c.grid, &stats);
  const np::WorkConsistency wc = np::min_work_consistency(gp, c.grid, 32, c.seed + 7);

  Report rep;
  put(rep, "mode", std::string("gauss-demo"));
  put(rep, "b11", b(0, 0));
  put(rep, "b22", b(1, 1));
  put(rep, "b12", b(0, 1));
  put(rep, "work", np::electrostatic_work(phi, b));
  put(rep, "cg_iterations", static_cast<double>(stats.iterations));
  put(rep, "cg_residual", stats.relative_residual);
  put(rep, "min_work_max_decrease", wc.max_decrease);
  put(rep, "min_work_ok", wc.ok ? std::string("true") : std::string("false"));

  const np::PlateState ps = np::PlateState::zero(c.grid);
  emit_outputs(c, ps, &phi, rep);
  return 0;
}

int run_mode(const np::RunConfig& c) {
  np::set_threads(c.threads);
  switch (c.mode) {
    case np::RunConfig::Mode::actuate: return run_actuate(c);
    case np::RunConfig::Mode::minmax: return run_minmax(c);
    case np::RunConfig::Mode::relax: return run_relax(c);
    case np::RunConfig::Mode::gamma_check: return run_gamma(c);
    case np::RunConfig::Mode::laminate_check: return run_laminate(c);
    default: return run_gauss_demo(c);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective nematic-elastomer bilayer plate models"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  CLI::App* run = app.add_subcommand("run", "solve a configured problem");
  run->add_option("config", run_path, "configuration file")->required();
  CLI::App* val = app.add_subcommand("validate", "check a configuration file");
  val->add_option("config", validate_path, "configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  const std::string path = run->parsed() ? run_path : validate_path;
  np::ParsedConfig pc = np::parse_config_file(path);
  np::validate_config(pc);

  if (const char* env = std::getenv("NEMATOPLATE_THREADS"))
    pc.config.threads = std::max(1, std::atoi(env));

  if (val->parsed()) {
    for (const auto& e : pc.errors) std::cout << e << "\n";
    for (const auto& w : pc.warnings) std::cout << w << "\n";
    return pc.errors.empty() ? 0 : kExitConfig;
  }

  for (const auto& w : pc.warnings) std::cerr << w << "\n";
  if (!pc.errors.empty()) {
    for (const auto& e : pc.errors) std::cerr << e << "\n";
    return kExitConfig;
  }

  try {
    return run_mode(pc.config);
  } catch (const std::exception& ex) {
    std::cerr << "solver failure: " << ex.what() << "\n";
    return kExitSolver;
  }
}
