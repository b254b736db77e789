#include "nematoplate/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace nematoplate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_convex_range(const MaterialParams& mp, const char* who) {
  mp.validate();
  if (!mp.convex_range())
    throw std::invalid_argument(std::string(who) +
                                ": convexity is guaranteed only for nu in [0, 1/2); got nu = " +
                                std::to_string(mp.nu));
}

// Pinned-node mask over the packed [z1 | z2 | z3] state.
std::vector<std::uint8_t> state_mask(const Grid2& g, const BoundarySpec& bc) {
  const DofMap map = apply_clamped(g, bc);
  std::vector<std::uint8_t> pin(3 * g.n(), 0);
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < g.n(); ++k) pin[c * g.n() + k] = map.pinned_node[k];
  return pin;
}

void mask_vec(const std::vector<std::uint8_t>& pin, VecX& x) {
  for (std::size_t k = 0; k < pin.size(); ++k)
    if (pin[k]) x[k] = 0.0;
}

PlateState state_from_packed(const Grid2& g, const VecX& x, Representation rep) {
  PlateState ps = PlateState::zero(g, rep);
  ps.zeta_prime.v = x.head(2 * g.n());
  ps.zeta3.v = x.tail(g.n());
  return ps;
}

// Approximate diagonal of the actuation Hessian, used as a Jacobi
// preconditioner. Cross couplings are dropped; only scale balance matters.
VecX actuation_diag(const PlateOps& ops, const MaterialParams& mp, LayerRegime layer,
                    bool midsection) {
  const int n = ops.grid.n();
  const double c1 = mp.plane_trace_coeff();
  const double tc = mp.trace_coeff();
  VecX diag = VecX::Zero(3 * n);

  auto add_sq = [&](const LinOp& op, double coeff, int block) {
    for (int r = 0; r < op.rows; ++r) {
      const double wr = 0.5 * ops.w[r] * coeff;
      for (int k = op.ptr[r]; k < op.ptr[r + 1]; ++k)
        diag[block * n + op.col[k]] += wr * op.val[k] * op.val[k];
    }
  };
  add_sq(ops.dx, 2.0 + 2.0 * c1, 0);
  add_sq(ops.dy, 1.0, 0);
  add_sq(ops.dy, 2.0 + 2.0 * c1, 1);
  add_sq(ops.dx, 1.0, 1);
  const double bend = midsection ? 1.0 / 6.0 : 2.0 / 3.0;
  add_sq(ops.hxx, bend * (1.0 + c1), 2);
  add_sq(ops.hyy, bend * (1.0 + c1), 2);
  for (int k = 0; k < n; ++k) {
    const double wk = ops.w[k];  // foundation terms carry unit weight
    if (layer == LayerRegime::thin && !midsection) {
      diag[k] += wk;
      diag[n + k] += wk;
    }
    diag[2 * n + k] += wk * (2.0 + 2.0 * tc);
  }
  for (int k = 0; k < 3 * n; ++k)
    if (diag[k] <= 0) diag[k] = 1.0;
  return diag;
}

struct QuadraticSolveResult {
  VecX x;
  SolveReport report;
};

// Preconditioned CG on a quadratic energy given by its full-state gradient
// functor. The energy trace uses the exact CG decrement, so it is monotone.
QuadraticSolveResult solve_quadratic(
    const std::function<VecX(const VecX&)>& grad_full, double e0,
    const std::vector<std::uint8_t>& pin, const VecX& diag, int max_iter, VecX warm) {
  const auto t0 = Clock::now();
  const int n = static_cast<int>(pin.size());
  QuadraticSolveResult out;
  out.x = warm.size() == n ? warm : VecX::Zero(n);
  mask_vec(pin, out.x);

  const VecX g0 = grad_full(VecX::Zero(n));
  auto apply_a = [&](const VecX& v) {
    VecX av = grad_full(v) - g0;
    mask_vec(pin, av);
    return av;
  };

  VecX g0m = g0;
  mask_vec(pin, g0m);
  VecX r = -(apply_a(out.x) + g0m);
  double energy = e0 + g0m.dot(out.x) + 0.5 * out.x.dot(apply_a(out.x));
  out.report.energy_trace.push_back(energy);

  const double b_norm = g0m.norm();
  const double r0 = std::max(r.norm(), 1e-300);
  VecX z = r.cwiseQuotient(diag);
  mask_vec(pin, z);
  VecX p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    const VecX ap = apply_a(p);
    const double pap = p.dot(ap);
    if (pap <= 0) break;
    const double alpha = rz / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    energy -= 0.5 * alpha * rz;
    out.report.energy_trace.push_back(energy);
    out.report.iterations = it + 1;
    if (r.norm() <= 1e-12 * std::max(r0, b_norm) ||
        r.norm() <= 1e-10 * (1.0 + std::abs(energy)))
      break;
    z = r.cwiseQuotient(diag);
    mask_vec(pin, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  out.report.grad_norm = r.norm();
  out.report.converged = true;
  out.report.wall_time_s = seconds_since(t0);
  return out;
}

// L-BFGS with Armijo backtracking for the convex non-quadratic relaxed solves.
struct LbfgsResult {
  VecX x;
  SolveReport report;
};

LbfgsResult lbfgs_minimize(const std::function<double(const VecX&, VecX&)>& eval,
                           const std::vector<std::uint8_t>& pin, VecX x0, int max_iter) {
  const auto t0 = Clock::now();
  const int n = static_cast<int>(pin.size());
  LbfgsResult out;
  VecX x = x0.size() == n ? x0 : VecX::Zero(n);
  mask_vec(pin, x);

  VecX g(n);
  double f = eval(x, g);
  mask_vec(pin, g);
  out.report.energy_trace.push_back(f);

  std::deque<std::pair<VecX, VecX>> mem;  // (s, y)
  const int memory = 8;
  for (int it = 0; it < max_iter; ++it) {
    if (g.norm() <= 1e-8 * (1.0 + std::abs(f))) {
      out.report.converged = true;
      break;
    }
    // Two-loop recursion.
    VecX q = g;
    std::vector<double> alpha(mem.size());
    for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = mem[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!mem.empty()) {
      const auto& [s, y] = mem.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    VecX d = -q;
    if (d.dot(g) >= 0) d = -g;

    double step = 1.0;
    const double slope = g.dot(d);
    VecX xn(n), gn(n);
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      xn = x + step * d;
      mask_vec(pin, xn);
      fn = eval(xn, gn);
      if (fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    mask_vec(pin, gn);
    VecX s = xn - x;
    VecX y = gn - g;
    if (s.dot(y) > 1e-14 * s.norm() * y.norm()) {
      mem.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(mem.size()) > memory) mem.pop_front();
    }
    x = xn;
    f = fn;
    g = gn;
    out.report.energy_trace.push_back(f);
    out.report.iterations = it + 1;
  }
  out.x = x;
  out.report.grad_norm = g.norm();
  out.report.wall_time_s = seconds_since(t0);
  return out;
}

// Core of the actuation inner solve; shared with the min-max outer loop.
QuadraticSolveResult actuation_inner(const QTensor& qbar, const MaterialParams& mp,
                                     const DielectricParams& dp,
                                     const ScalingRegime& regime, const PlateOps& ops,
                                     const std::vector<std::uint8_t>& pin,
                                     const VecX& warm) {
  const Grid2& g = ops.grid;
  const bool midsection = regime.layer() == LayerRegime::thick;
  const Representation rep =
      midsection ? Representation::midsection : Representation::interface;

  auto grad_full = [&](const VecX& x) {
    const PlateState ps = state_from_packed(g, x, rep);
    const EnergyResult r =
        midsection ? j_actuation_midsection(ps, qbar, nullptr, mp, dp, regime, ops)
                   : j_actuation(ps, qbar, nullptr, mp, dp, regime, ops);
    return r.grad;
  };
  const PlateState zero = PlateState::zero(g, rep);
  const EnergyResult at_zero =
      midsection ? j_actuation_midsection(zero, qbar, nullptr, mp, dp, regime, ops)
                 : j_actuation(zero, qbar, nullptr, mp, dp, regime, ops);

  const VecX diag = actuation_diag(ops, mp, regime.layer(), midsection);
  return solve_quadratic(grad_full, at_zero.value, pin, diag, 30 * g.n(), warm);
}

}  // namespace

ActuationSolution minimize_actuation(const QTensor& qbar, const BoundarySpec& bc,
                                     const MaterialParams& mp, const DielectricParams& dp,
                                     const ScalingRegime& regime, const Grid2& grid,
                                     const std::optional<Phi0Spec>& phi0) {
  require_convex_range(mp, "minimize_actuation");
  regime.validate();
  if (!in_QB(qbar))
    throw std::invalid_argument("minimize_actuation: Q outside the admissible sets");

  const bool midsection = regime.layer() == LayerRegime::thick;
  const PlateOps ops = PlateOps::make(grid, bc);
  const auto pin = state_mask(grid, bc);

  ActuationSolution sol;
  double ew = 0.0;
  if (phi0) {
    GaussProblem gp;
    gp.B = schur_B(d_tensor(qbar, dp));
    gp.phi0_const = phi0->a0;
    gp.phi0_lin = phi0->lin;
    gp.bc = bc;
    sol.phi = solve_gauss(gp, grid);
    ew = electrostatic_work(sol.phi, gp.B);
  }

  QuadraticSolveResult qr =
      actuation_inner(qbar, mp, dp, regime, ops, pin, VecX());
  sol.state = state_from_packed(
      grid, qr.x, midsection ? Representation::midsection : Representation::interface);
  sol.report = std::move(qr.report);

  const EnergyResult at_opt =
      midsection ? j_actuation_midsection(sol.state, qbar, phi0 ? &sol.phi : nullptr, mp,
                                          dp, regime, ops)
                 : j_actuation(sol.state, qbar, phi0 ? &sol.phi : nullptr, mp, dp, regime,
                               ops);
  sol.report.at_opt = at_opt.bd;
  for (auto& e : sol.report.energy_trace) e -= ew;
  return sol;
}

int QParametrization::dim() const {
  switch (set) {
    case Set::frank: return 2;
    case Set::uniaxial: return 3;
    default: return 5;
  }
}

namespace {

Vec3 director_from_angles(double theta, double phi, int chart) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  // Chart 0 is polar about e3; chart 1 about e1 (used near the e3 poles).
  if (chart == 0) return Vec3(st * cp, st * sp, ct);
  return Vec3(ct, st * cp, st * sp);
}

// Orthonormal basis of traceless symmetric matrices for the biaxial chart.
Mat3 biaxial_basis(int k) {
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s6 = 1.0 / std::sqrt(6.0);
  Mat3 m = Mat3::Zero();
  switch (k) {
    case 0:
      m.diagonal() << s2, -s2, 0.0;
      break;
    case 1:
      m.diagonal() << s6, s6, -2.0 * s6;
      break;
    case 2:
      m(0, 1) = m(1, 0) = s2;
      break;
    case 3:
      m(0, 2) = m(2, 0) = s2;
      break;
    default:
      m(1, 2) = m(2, 1) = s2;
      break;
  }
  return m;
}

}  // namespace

QTensor QParametrization::decode(const VecX& coords, int chart) const {
  switch (set) {
    case Set::frank:
      return make_frank(director_from_angles(coords[0], coords[1], chart));
    case Set::uniaxial: {
      const double s = std::clamp(coords[2], -0.5, 1.0);
      return make_uniaxial(s, director_from_angles(coords[0], coords[1], chart));
    }
    default: {
      Mat3 m = Mat3::Zero();
      for (int k = 0; k < 5; ++k) m += coords[k] * biaxial_basis(k);
      return project_QB(m);
    }
  }
}

VecX QParametrization::encode(const QTensor& q, int* chart) const {
  if (set == Set::biaxial) {
    VecX c(5);
    const Mat3 m = q.mat();
    for (int k = 0; k < 5; ++k) c[k] = (biaxial_basis(k) * m).trace();
    if (chart) *chart = 0;
    return c;
  }
  const SpectralData sd = eig_sym3(q.mat());
  // The optic axis is the non-repeated eigenvalue: the top one for prolate
  // states (s > 0), the bottom one for oblate states (s < 0).
  const int axis =
      sd.eigvals(0) - sd.eigvals(1) >= sd.eigvals(1) - sd.eigvals(2) ? 0 : 2;
  const Vec3 n = sd.eigvecs.col(axis);
  const int ch = std::abs(n.z()) > 0.9 ? 1 : 0;
  if (chart) *chart = ch;
  VecX c(dim());
  if (ch == 0) {
    c[0] = std::acos(std::clamp(n.z(), -1.0, 1.0));
    c[1] = std::atan2(n.y(), n.x());
  } else {
    c[0] = std::acos(std::clamp(n.x(), -1.0, 1.0));
    c[1] = std::atan2(n.z(), n.y());
  }
  if (set == Set::uniaxial) c[2] = 1.5 * sd.eigvals(axis);
  return c;
}

MinMaxSolution solve_minmax(const BoundarySpec& bc, const Phi0Spec& phi0,
                            const QParametrization& qset, const MaterialParams& mp,
                            const DielectricParams& dp, const ScalingRegime& regime,
                            const Grid2& grid, int multistart, unsigned seed) {
  require_convex_range(mp, "solve_minmax");
  regime.validate();
  const auto t0 = Clock::now();
  const PlateOps ops = PlateOps::make(grid, bc);
  const auto pin = state_mask(grid, bc);
  const bool electro = bc.any_phi_dirichlet();

  VecX warm;  // warm start shared across outer evaluations
  auto outer_value = [&](const VecX& coords, int chart) {
    const QTensor qbar = qset.decode(coords, chart);
    double ew = 0.0;
    if (electro) {
      GaussProblem gp;
      gp.B = schur_B(d_tensor(qbar, dp));
      gp.phi0_const = phi0.a0;
      gp.phi0_lin = phi0.lin;
      gp.bc = bc;
      const ScalarField2 phi = solve_gauss(gp, grid);
      ew = electrostatic_work(phi, gp.B);
    }
    QuadraticSolveResult qr = actuation_inner(qbar, mp, dp, regime, ops, pin, warm);
    warm = qr.x;
    return qr.report.energy_trace.back() - ew;
  };

  // Deterministic multistart seeds.
  std::vector<VecX> starts;
  const int m = std::max(multistart, qset.set == QParametrization::Set::frank ? 8 : 4);
  if (qset.set == QParametrization::Set::biaxial) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 0.25);
    starts.push_back(VecX::Zero(5));
    for (int k = 1; k < m; ++k) {
      VecX c(5);
      for (int i = 0; i < 5; ++i) c[i] = nd(rng);
      starts.push_back(c);
    }
  } else {
    // Fibonacci hemisphere (directors are head-tail symmetric).
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
      const double z = (k + 0.5) / m;
      const double phi_a = k * golden;
      const Vec3 n(std::sqrt(1.0 - z * z) * std::cos(phi_a),
                   std::sqrt(1.0 - z * z) * std::sin(phi_a), z);
      int chart = 0;
      VecX c = qset.encode(make_frank(n), &chart);
      if (qset.set == QParametrization::Set::uniaxial)
        c[2] = 0.25 + 0.5 * (k % 2);  // alternate order-parameter seeds
      // Stash the chart in the start by decoding later with chart recomputed.
      VecX cc(qset.dim() + 1);
      cc.head(qset.dim()) = c;
      cc[qset.dim()] = chart;
      starts.push_back(cc);
      continue;
    }
  }

  const double h = 1e-5;
  MinMaxSolution sol;
  int total_iters = 0;
  for (const VecX& start : starts) {
    const int dim = qset.dim();
    VecX x = start.head(dim);
    int chart = start.size() > dim ? static_cast<int>(start[dim]) : 0;

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);
    double f = outer_value(x, chart);
    VecX g(dim);
    auto fd_grad = [&](const VecX& at, VecX& out) {
      for (int i = 0; i < dim; ++i) {
        VecX xp = at, xm = at;
        xp[i] += h;
        xm[i] -= h;
        out[i] = (outer_value(xp, chart) - outer_value(xm, chart)) / (2.0 * h);
      }
    };
    fd_grad(x, g);

    for (int it = 0; it < 100; ++it) {
      ++total_iters;
      if (g.lpNorm<Eigen::Infinity>() <= 1e-6) break;
      VecX d = -(hinv * g);
      if (d.dot(g) >= 0) d = -g;
      double step = 1.0;
      double fn = f;
      VecX xn = x;
      bool ok = false;
      for (int ls = 0; ls < 30; ++ls) {
        xn = x + step * d;
        if (qset.set == QParametrization::Set::uniaxial)
          xn[2] = std::clamp(xn[2], -0.5, 1.0);
        fn = outer_value(xn, chart);
        if (fn <= f + 1e-4 * step * g.dot(xn - x) || fn < f - 1e-14) {
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
      VecX gn(dim);
      fd_grad(xn, gn);
      const VecX s = xn - x, y = gn - g;
      const double sy = s.dot(y);
      if (sy > 1e-12) {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
        const Eigen::MatrixXd syt = s * y.transpose() / sy;
        hinv = (I - syt) * hinv * (I - syt.transpose()) + s * s.transpose() / sy;
      }
      x = xn;
      f = fn;
      g = gn;
      // Chart maintenance for the director sets.
      if (qset.set != QParametrization::Set::biaxial) {
        const QTensor q = qset.decode(x, chart);
        int fresh_chart = 0;
        VecX fresh = qset.encode(q, &fresh_chart);
        if (qset.set == QParametrization::Set::uniaxial) fresh[2] = x[2];
        if (fresh_chart != chart) {
          x = fresh;
          chart = fresh_chart;
          hinv = Eigen::MatrixXd::Identity(dim, dim);
          fd_grad(x, g);
        }
      }
    }

    MinMaxBasin basin;
    basin.energy = f;
    basin.coords = x;
    basin.qbar = qset.decode(x, chart);
    sol.basins.push_back(std::move(basin));
  }

  std::sort(sol.basins.begin(), sol.basins.end(), [](const auto& a, const auto& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    for (int i = 0; i < a.coords.size(); ++i)
      if (a.coords[i] != b.coords[i]) return a.coords[i] < b.coords[i];
    return false;
  });

  sol.qbar = sol.basins.front().qbar;
  ActuationSolution inner = minimize_actuation(
      sol.qbar, bc, mp, dp, regime, grid,
      electro ? std::optional<Phi0Spec>(phi0) : std::nullopt);
  sol.state = std::move(inner.state);
  sol.phi = std::move(inner.phi);
  sol.report = std::move(inner.report);
  sol.report.iterations = total_iters;
  sol.report.wall_time_s = seconds_since(t0);
  return sol;
}

RelaxedSolution minimize_relaxed(const BoundarySpec& bc, const Loads& loads,
                                 const MaterialParams& mp, const ScalingRegime& regime,
                                 const Grid2& grid) {
  require_convex_range(mp, "minimize_relaxed");
  regime.validate();
  const bool midsection = regime.layer() == LayerRegime::thick;
  const Representation rep =
      midsection ? Representation::midsection : Representation::interface;
  const PlateOps ops = PlateOps::make(grid, bc);
  const auto pin = state_mask(grid, bc);
  const int n = grid.n();

  const VecX load_grad_interface = load_work_gradient(loads, grid);
  const LinOp dx = op_dx(grid);
  const LinOp dy = op_dy(grid);

  auto eval = [&](const VecX& x, VecX& g) {
    const PlateState ps = state_from_packed(grid, x, rep);
    const EnergyResult r = midsection ? j_relax_midsection(ps, mp, regime, ops)
                                      : j_relax(ps, mp, regime, ops);
    g = r.grad - load_grad_interface;
    double work;
    if (midsection) {
      // Loads act on the interface displacement zeta' = zeta'_sharp + grad z3 / 2.
      work = load_work(loads, kl_shift(ps));
      g.tail(n) -= 0.5 * (dx.applyT(load_grad_interface.head(n)) +
                          dy.applyT(load_grad_interface.segment(n, n)));
    } else {
      work = load_work(loads, ps);
    }
    return r.value - work;
  };

  LbfgsResult lr = lbfgs_minimize(eval, pin, VecX(), 5000);
  RelaxedSolution sol;
  sol.state = state_from_packed(grid, lr.x, rep);
  sol.report = std::move(lr.report);
  const EnergyResult at_opt = midsection ? j_relax_midsection(sol.state, mp, regime, ops)
                                         : j_relax(sol.state, mp, regime, ops);
  sol.report.at_opt = at_opt.bd;
  sol.report.at_opt.load_work =
      midsection ? load_work(loads, kl_shift(sol.state)) : load_work(loads, sol.state);
  sol.report.at_opt.recompute_total();
  return sol;
}

}  // namespace nematoplate
