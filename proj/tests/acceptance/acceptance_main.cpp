// Acceptance suite: one pass/fail line per criterion, selected by number on
// the command line ("all" runs every criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nematoplate/config.hpp"
#include "nematoplate/io.hpp"
#include "nematoplate/limit3d.hpp"
#include "nematoplate/solver.hpp"
#include "../test_support.hpp"

using namespace nematoplate;
namespace ts = testsupport;

namespace {

Grid2 unit_grid(int n) { return Grid2{n, n, 1.0, 1.0}; }

bool criterion1_projection(std::string& detail) {
  auto gen = ts::rng(1001);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3 m = ts::random_symmetric(gen, trial % 4 == 0 ? 2.5 : 0.8);
    const Mat3 p = project_QB(m).mat();
    const Mat3 d = ts::dykstra_project_QB(m);
    worst = std::max(worst, (p - d).cwiseAbs().maxCoeff());
  }
  Mat3 m1 = Mat3::Zero();
  m1(2, 2) = 1.0;
  const double v1 = dist2_QB(m1).value;
  m1(2, 2) = 3.0;
  const double v3 = dist2_QB(m1).value;
  const double e1 = std::abs(v1 - 1.0 / 3.0);
  const double e3 = std::abs(v3 - 17.0 / 3.0);
  std::ostringstream os;
  os << "max |P - Dykstra| = " << worst << ", dist2 errors " << e1 << ", " << e3;
  detail = os.str();
  return worst <= 1e-8 && e1 <= 1e-10 && e3 <= 1e-10;
}

bool criterion2_gradients(std::string& detail) {
  const Grid2 g = unit_grid(8);
  MaterialParams mp;
  mp.nu = 0.3;
  DielectricParams dp;
  const QTensor qbar = make_frank((Vec3::UnitX() + Vec3::UnitZ()).normalized());
  const PlateOps ops = PlateOps::make(g, BoundarySpec::all_clamped());
  const ScalingRegime thin_r = ScalingRegime::thin();
  const ScalingRegime thin_a = ScalingRegime::thin(Flavor::actuation);

  double worst = 0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto gen = ts::rng(seed);
    std::normal_distribution<double> nd(0.0, 0.3);
    VecX x(3 * g.n());
    for (int k = 0; k < x.size(); ++k) x[k] = nd(gen);
    auto state_of = [&](const VecX& v) {
      PlateState ps = PlateState::zero(g);
      ps.zeta_prime.v = v.head(2 * g.n());
      ps.zeta3.v = v.tail(g.n());
      return ps;
    };
    {
      auto value = [&](const VecX& v) { return j_relax(state_of(v), mp, thin_r, ops).value; };
      const VecX grad = j_relax(state_of(x), mp, thin_r, ops).grad;
      const VecX fd = ts::fd_gradient(value, x, 1e-6);
      worst = std::max(worst, (grad - fd).cwiseAbs().maxCoeff() /
                                  std::max(1.0, fd.cwiseAbs().maxCoeff()));
    }
    {
      auto value = [&](const VecX& v) {
        return j_actuation(state_of(v), qbar, nullptr, mp, dp, thin_a, ops).value;
      };
      const VecX grad = j_actuation(state_of(x), qbar, nullptr, mp, dp, thin_a, ops).grad;
      const VecX fd = ts::fd_gradient(value, x, 1e-6);
      worst = std::max(worst, (grad - fd).cwiseAbs().maxCoeff() /
                                  std::max(1.0, fd.cwiseAbs().maxCoeff()));
    }
  }
  std::ostringstream os;
  os << "worst relative gradient error = " << worst;
  detail = os.str();
  return worst <= 1e-5;
}

bool criterion3_schur(std::string& detail) {
  auto gen = ts::rng(1003);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Mat3 a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = nd(gen);
    const Mat3 d = a.transpose() * a + 0.05 * Mat3::Identity();
    const Vec2 grad(nd(gen), nd(gen));
    auto energy = [&](double c) {
      const Vec3 v(grad.x(), grad.y(), c);
      return v.dot(d * v);
    };
    const double direct = ts::quadratic_min_value(energy);
    const double reduced = grad.dot(schur_B(d) * grad);
    worst = std::max(worst, std::abs(direct - reduced) / (1.0 + std::abs(direct)));
  }

  Mat3 d2;
  d2 << 2, 0, 1, 0, 2, 0, 1, 0, 2;
  const Mat2 b2 = schur_B(d2);
  DielectricParams dp;
  dp.eps_perp = 1.0;
  dp.eps_par = 4.0;
  const Mat2 bt =
      schur_B(d_tensor(make_frank((Vec3::UnitX() + Vec3::UnitZ()).normalized()), dp));
  const bool worked = b2(0, 0) == 1.5 && b2(1, 1) == 2.0 &&
                      std::abs(bt(0, 0) - 1.6) <= 1e-15 && bt(1, 1) == 1.0;
  std::ostringstream os;
  os << "worst oracle mismatch = " << worst << ", worked values "
     << (worked ? "exact" : "off");
  detail = os.str();
  return worst <= 1e-10 && worked;
}

bool criterion4_gauss_affine(std::string& detail) {
  const Grid2 g = unit_grid(33);
  GaussProblem gp;
  gp.B << 1.6, 0.3, 0.3, 1.0;
  gp.phi0_const = 0.4;
  gp.phi0_lin = Vec2(2.0, -1.0);
  const ScalarField2 phi = solve_gauss(gp, g);
  double err = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      err = std::max(err, std::abs(phi.v[g.idx(i, j)] -
                                   (0.4 + 2.0 * g.x(i) - g.y(j))));
  std::ostringstream os;
  os << "max nodal error = " << err;
  detail = os.str();
  return err <= 1e-10;
}

bool criterion5_shift_identity(std::string& detail) {
  const Grid2 g = unit_grid(16);
  const PlateOps ops = PlateOps::make(g, BoundarySpec::all_free());
  MaterialParams mp;
  mp.nu = 0.3;
  const ScalingRegime thick = ScalingRegime::thick();

  PlateState sharp = PlateState::zero(g, Representation::midsection);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const double x = g.x(i), y = g.y(j);
      sharp.zeta_prime.u1(k) = x * x * x - 0.5 * x * y * y + 0.25 * y;
      sharp.zeta_prime.u2(k) = y * y * y + x * x * y - x;
      sharp.zeta3.v[k] = 0.7 * x * x - 0.4 * x * y + 0.3 * y * y + 0.1 * x;
    }
  const PlateState interface_state = kl_shift(sharp);
  const double lhs = j_relax(interface_state, mp, thick, ops).value;
  const double rhs = j_relax_midsection(sharp, mp, thick, ops).value;
  const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
  std::ostringstream os;
  os << "interface " << lhs << " vs mid-section " << rhs << ", relative gap " << err;
  detail = os.str();
  return err <= 1e-9;
}

bool criterion6_fig2(std::string& detail) {
  const Grid2 g = unit_grid(65);
  MaterialParams mp;
  mp.nu = 0.3;
  const QTensor qbar = make_frank((Vec3::UnitX() + Vec3::UnitZ()).normalized());
  const ActuationSolution sol =
      minimize_actuation(qbar, BoundarySpec::all_clamped(), mp, DielectricParams{},
                         ScalingRegime::thin(Flavor::actuation), g);
  const double zmax = sol.state.zeta3.v.cwiseAbs().maxCoeff();
  const double sym = reflection_residual_y(sol.state);
  bool monotone = true;
  for (std::size_t k = 1; k < sol.report.energy_trace.size(); ++k)
    if (sol.report.energy_trace[k] > sol.report.energy_trace[k - 1] + 1e-12)
      monotone = false;
  std::ostringstream os;
  os << "max |zeta3| = " << zmax << ", symmetry residual = " << sym << ", trace "
     << (monotone ? "monotone" : "non-monotone") << ", " << sol.report.iterations
     << " iterations in " << sol.report.wall_time_s << " s";
  detail = os.str();
  return zmax > 0.0 && sym < 1e-8 && monotone;
}

bool criterion7_minmax(std::string& detail) {
  const Grid2 g = unit_grid(9);
  MaterialParams mp;
  mp.nu = 0.3;
  DielectricParams dp;
  dp.eps_perp = 1.0;
  dp.eps_par = 4.0;
  QParametrization qp;
  qp.set = QParametrization::Set::frank;
  Phi0Spec phi0;
  phi0.lin = Vec2(1.0, 0.0);
  const BoundarySpec bc = BoundarySpec::all_clamped();
  const ScalingRegime regime = ScalingRegime::thin(Flavor::actuation);

  const MinMaxSolution sol = solve_minmax(bc, phi0, qp, mp, dp, regime, g, 8, 1);

  GaussProblem gp;
  gp.B = schur_B(d_tensor(sol.qbar, dp));
  gp.phi0_const = phi0.a0;
  gp.phi0_lin = phi0.lin;
  gp.bc = bc;
  const ScalarField2 phi2 = solve_gauss(gp, g);
  const double dwork = std::abs(electrostatic_work(sol.phi, gp.B) -
                                electrostatic_work(phi2, gp.B));
  const ActuationSolution re = minimize_actuation(sol.qbar, bc, mp, dp, regime, g, phi0);
  const double denergy = std::abs(re.report.at_opt.total - sol.report.at_opt.total);

  DielectricParams iso;
  iso.eps_perp = iso.eps_par = 2.0;
  const MinMaxSolution with_field = solve_minmax(bc, phi0, qp, mp, iso, regime, g, 8, 1);
  const MinMaxSolution mech_only =
      solve_minmax(bc, Phi0Spec{}, qp, mp, iso, regime, g, 8, 1);
  const double qgap =
      (with_field.qbar.mat() - mech_only.qbar.mat()).cwiseAbs().maxCoeff();

  std::ostringstream os;
  os << "re-solve gaps: work " << dwork << ", energy " << denergy
     << "; isotropic decoupling gap " << qgap;
  detail = os.str();
  const double scale = 1.0 + std::abs(sol.report.at_opt.total);
  return dwork <= 1e-10 * scale && denergy <= 1e-10 * scale && qgap <= 1e-4;
}

bool criterion8_laminates(std::string& detail) {
  auto gen = ts::rng(1008);
  double avg_worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const QTensor qbar = project_QB(ts::random_symmetric(gen, 0.6));
    const LaminateField lf = laminate_profile(qbar, 0.02, ts::random_unit(gen));
    avg_worst = std::max(avg_worst, std::sqrt((lf.average() - qbar).norm2()));
  }

  const TwoVariantDisplacement tv =
      two_variant_displacement(Vec3::UnitX(), Vec3(0.0, 0.6, 0.8).normalized(), 0.4, 0.1);
  double jump_worst = 0;
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    Vec3 x(nd(gen), nd(gen), nd(gen));
    const double t = x.dot(tv.interface_normal);
    const double snap = std::floor(t / tv.eta) * tv.eta +
                        (trial % 2 ? tv.fraction * tv.eta : 0.0);
    x += (snap - t) * tv.interface_normal;
    const Vec3 jump = tv.eval(x + 1e-13 * tv.interface_normal) -
                      tv.eval(x - 1e-13 * tv.interface_normal);
    jump_worst = std::max(jump_worst, jump.norm());
  }
  const Eigen::JacobiSVD<Mat3> svd(tv.gradient_in(1) - tv.gradient_in(2));
  const double sv2 = svd.singularValues()(1);

  const LaminateField iso = laminate_profile(QTensor{}, 0.01, Vec3::UnitX());
  const double rate = weak_convergence_check(iso, QTensor{}).fitted_rate;

  std::ostringstream os;
  os << "avg err " << avg_worst << ", interface jump " << jump_worst
     << ", 2nd singular value " << sv2 << ", weak rate " << rate;
  detail = os.str();
  return avg_worst <= 1e-12 && jump_worst <= 1e-12 && sv2 <= 1e-12 && rate >= 0.8 &&
         rate <= 1.2;
}

bool criterion9_gamma(std::string& detail) {
  const Grid2 g = unit_grid(17);
  MaterialParams mp;
  mp.nu = 0.3;
  DielectricParams dp;
  dp.eps_perp = 1.0;
  dp.eps_par = 4.0;

  PlateState zeta = PlateState::zero(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const double x = g.x(i), y = g.y(j);
      zeta.zeta3.v[k] = 0.2 * (x * x - 0.5 * x * y);
      zeta.zeta_prime.u1(k) = 0.1 * x * x * y;
      zeta.zeta_prime.u2(k) = 0.05 * y * y;
    }

  // (a) film recovery with an O(eps^2) fit.
  const PlateOps ops = PlateOps::make(g, BoundarySpec::all_free());
  const double j2 = film_energy(zeta, mp, ops).value;
  std::vector<double> gaps;
  bool film_ok = true;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const Field3 f = recovery_film(zeta, eps, mp, 9);
    const double gap = assemble_j3d(0.0, eps, f, mp, dp, 0.0).film - j2;
    if (!(gap > 0) || (!gaps.empty() && !(gap < gaps.back()))) film_ok = false;
    gaps.push_back(gap);
  }
  for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
    if (std::abs(gaps[k] / gaps[k + 1] - 4.0) > 0.2) film_ok = false;

  // (b) 3D electrostatic work approaching the Schur-reduced 2D work.
  const QTensor qbar = make_frank((Vec3::UnitX() + Vec3::UnitZ()).normalized());
  GaussProblem gp;
  gp.B = schur_B(d_tensor(qbar, dp));
  gp.phi0_lin = Vec2(1.0, 0.0);
  const Grid2 g13 = unit_grid(13);
  const double w2 = electrostatic_work(solve_gauss(gp, g13), gp.B);
  const auto qf = [&](const Vec3&) { return qbar; };
  double prev = 1e300;
  bool work_ok = true;
  for (double eps : {0.1, 0.05}) {
    const Gauss3Result r = gauss3d_desk(0.0, eps, Grid3::bonding(g13, 9), qf, dp, 0.0,
                                        Vec2(1.0, 0.0), BoundarySpec{});
    const double gap = std::abs(r.work - w2);
    if (!(gap < prev)) work_ok = false;
    prev = gap;
  }

  // (c) combined upper-bound trend.
  const double eps_list[] = {0.2, 0.1, 0.05};
  const auto rows =
      upper_bound_trend(zeta, Vec3::UnitX(), Vec3::UnitY(), 0.5, eps_list, mp, 0.0);
  bool comb_ok = rows.size() == 3;
  for (const auto& row : rows) comb_ok = comb_ok && row.gap > 0;
  comb_ok = comb_ok && rows[0].gap > rows[1].gap && rows[1].gap > rows[2].gap;

  std::ostringstream os;
  os << "film fit " << (film_ok ? "ok" : "off") << " (gaps";
  for (double gp_ : gaps) os << ' ' << gp_;
  os << "), work trend " << (work_ok ? "ok" : "off") << ", combined gaps";
  for (const auto& row : rows) os << ' ' << row.gap;
  detail = os.str();
  return film_ok && work_ok && comb_ok;
}

bool criterion10_cli_roundtrip(std::string& detail) {
  // End-to-end determinism of the solve -> export pipeline: two fresh runs of
  // the same configuration must produce byte-identical CSV files, and the
  // re-import must be exact.
  const std::string cfg_text = R"([run]
mode = actuate
regime = thin
seed = 5
[grid]
nx = 17
ny = 17
[material]
nu = 0.3
[q]
kind = frank
director = 0.70710678118654752, 0, 0.70710678118654752
[phi]
enabled = true
ax = 1.0
dirichlet = left, right, bottom, top
)";
  ParsedConfig pc = parse_config_text(cfg_text);
  validate_config(pc);
  if (!pc.errors.empty()) {
    detail = "config rejected: " + pc.errors.front();
    return false;
  }
  auto run_once = [&](const std::string& path) {
    const RunConfig& c = pc.config;
    const std::optional<Phi0Spec> phi0 = Phi0Spec{c.phi_a0, c.phi_lin};
    const ActuationSolution sol =
        minimize_actuation(c.qtensor(), c.bc, c.material, c.dielectric,
                           c.regime(Flavor::actuation), c.grid, phi0);
    write_fields_csv(path, sol.state, &sol.phi);
    return sol;
  };
  const std::string p1 = "acceptance_run1.csv", p2 = "acceptance_run2.csv";
  const ActuationSolution sol = run_once(p1);
  run_once(p2);

  auto slurp = [](const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    std::string data;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, n);
    std::fclose(f);
    return data;
  };
  const bool identical = slurp(p1) == slurp(p2);

  const FieldsCsv back = read_fields_csv(p1, pc.config.grid);
  const double reimport =
      std::max((back.state.zeta_prime.v - sol.state.zeta_prime.v).cwiseAbs().maxCoeff(),
               (back.state.zeta3.v - sol.state.zeta3.v).cwiseAbs().maxCoeff());
  std::remove(p1.c_str());
  std::remove(p2.c_str());

  std::ostringstream os;
  os << "byte-identical: " << (identical ? "yes" : "no") << ", re-import error "
     << reimport;
  detail = os.str();
  return identical && reimport == 0.0;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "projection oracle equivalence", criterion1_projection},
      {2, "gradient consistency", criterion2_gradients},
      {3, "Schur identities", criterion3_schur},
      {4, "Gauss affine exactness", criterion4_gauss_affine},
      {5, "thick-regime shift identity", criterion5_shift_identity},
      {6, "clamped tilted-director actuation", criterion6_fig2},
      {7, "min-max fixed-point certificate", criterion7_minmax},
      {8, "laminate suite", criterion8_laminates},
      {9, "Gamma trend tables", criterion9_gamma},
      {10, "CLI determinism and round-trip", criterion10_cli_roundtrip},
  };

  const std::string which = argc > 1 ? argv[1] : "all";
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (which != "all" && which != std::to_string(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.c_str(), dt);
    if (!ok) ++failures;
  }
  return failures;
}
