#include "nematoplate/gauss2d.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nematoplate {

double GaussProblem::eval_phi0(const Grid2& g, int i, int j) const {
  if (phi0_nodal) return (*phi0_nodal)[g.idx(i, j)];
  return phi0_const + phi0_lin.x() * g.x(i) + phi0_lin.y() * g.y(j);
}

namespace {

// Gradient of the cell-wise work functional; linear in phi.
void work_gradient_accumulate(const Grid2& g, const Mat2& B, const VecX& phi, VecX& grad) {
  const double hx = g.hx(), hy = g.hy();
  const double cxx = B(0, 0) * hy / (6.0 * hx);
  const double cyy = B(1, 1) * hx / (6.0 * hy);
  const double cxy = B(0, 1) / 4.0;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const int c00 = g.idx(i, j), c10 = g.idx(i + 1, j);
      const int c01 = g.idx(i, j + 1), c11 = g.idx(i + 1, j + 1);
      const double u = phi[c10] - phi[c00];
      const double v = phi[c11] - phi[c01];
      const double w = phi[c01] - phi[c00];
      const double z = phi[c11] - phi[c10];
      const double du = cxx * (2.0 * u + v) + cxy * (w + z);
      const double dv = cxx * (u + 2.0 * v) + cxy * (w + z);
      const double dw = cyy * (2.0 * w + z) + cxy * (u + v);
      const double dz = cyy * (w + 2.0 * z) + cxy * (u + v);
      grad[c10] += du;
      grad[c00] -= du + dw;
      grad[c11] += dv + dz;
      grad[c01] += dw - dv;
      grad[c10] -= dz;
    }
}

VecX jacobi_diagonal(const Grid2& g, const Mat2& B) {
  const double hx = g.hx(), hy = g.hy();
  const double a = B(0, 0) * hy / (3.0 * hx);
  const double b = B(1, 1) * hx / (3.0 * hy);
  const double c = B(0, 1) / 2.0;
  VecX d = VecX::Zero(g.n());
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      d[g.idx(i, j)] += a + b + c;
      d[g.idx(i + 1, j)] += a + b - c;
      d[g.idx(i, j + 1)] += a + b - c;
      d[g.idx(i + 1, j + 1)] += a + b + c;
    }
  return d;
}

std::vector<std::uint8_t> dirichlet_nodes(const Grid2& g, const BoundarySpec& bc) {
  std::vector<std::uint8_t> pin(g.n(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const bool d = (i == 0 && bc.phi_left == PhiBC::dirichlet) ||
                     (i == g.nx - 1 && bc.phi_right == PhiBC::dirichlet) ||
                     (j == 0 && bc.phi_bottom == PhiBC::dirichlet) ||
                     (j == g.ny - 1 && bc.phi_top == PhiBC::dirichlet);
      if (d) pin[g.idx(i, j)] = 1;
    }
  return pin;
}

}  // namespace

double electrostatic_work(const ScalarField2& phi, const Mat2& B) {
  const Grid2& g = phi.grid;
  const double hx = g.hx(), hy = g.hy();
  const double cxx = B(0, 0) * hy / (6.0 * hx);
  const double cyy = B(1, 1) * hx / (6.0 * hy);
  const double cxy = B(0, 1) / 4.0;
  double acc = 0;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double p00 = phi.v[g.idx(i, j)], p10 = phi.v[g.idx(i + 1, j)];
      const double p01 = phi.v[g.idx(i, j + 1)], p11 = phi.v[g.idx(i + 1, j + 1)];
      const double u = p10 - p00, v = p11 - p01;
      const double w = p01 - p00, z = p11 - p10;
      acc += cxx * (u * u + u * v + v * v) + cyy * (w * w + w * z + z * z) +
             cxy * (u + v) * (w + z);
    }
  return acc;
}

VecX electrostatic_work_gradient(const ScalarField2& phi, const Mat2& B) {
  VecX grad = VecX::Zero(phi.grid.n());
  work_gradient_accumulate(phi.grid, B, phi.v, grad);
  return grad;
}

ScalarField2 solve_gauss(const GaussProblem& gp, const Grid2& g, GaussStats* stats) {
  g.validate();
  if (!gp.bc.any_phi_dirichlet())
    throw std::invalid_argument("solve_gauss: needs a Dirichlet part of positive length");
  if (gp.B(0, 0) <= 0 || gp.B.determinant() <= 0)
    throw std::invalid_argument("solve_gauss: B must be symmetric positive definite");

  const auto pin = dirichlet_nodes(g, gp.bc);
  ScalarField2 phi(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (pin[g.idx(i, j)]) phi.v[g.idx(i, j)] = gp.eval_phi0(g, i, j);

  auto mask = [&](VecX& x) {
    for (int k = 0; k < g.n(); ++k)
      if (pin[k]) x[k] = 0.0;
  };

  // CG on the free dofs; pinned values enter through the initial residual.
  VecX r = VecX::Zero(g.n());
  work_gradient_accumulate(g, gp.B, phi.v, r);
  r = -r;
  mask(r);
  const double r0 = r.norm();
  const double tol = 1e-12;
  GaussStats st;
  if (r0 > 0.0) {
    VecX diag = jacobi_diagonal(g, gp.B);
    for (int k = 0; k < g.n(); ++k)
      if (diag[k] <= 0) diag[k] = 1.0;
    VecX z = r.cwiseQuotient(diag);
    mask(z);
    VecX p = z;
    double rz = r.dot(z);
    const int maxit = 10 * g.n();
    for (int it = 0; it < maxit; ++it) {
      VecX ap = VecX::Zero(g.n());
      work_gradient_accumulate(g, gp.B, p, ap);
      mask(ap);
      const double pap = p.dot(ap);
      if (pap <= 0) break;
      const double alpha = rz / pap;
      phi.v += alpha * p;
      r -= alpha * ap;
      st.iterations = it + 1;
      if (r.norm() <= tol * r0) break;
      z = r.cwiseQuotient(diag);
      mask(z);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    st.relative_residual = r.norm() / r0;
  }
  if (stats) *stats = st;
  return phi;
}

WorkConsistency min_work_consistency(const GaussProblem& gp, const Grid2& g, int trials,
                                     unsigned seed) {
  const ScalarField2 phi = solve_gauss(gp, g);
  const double w0 = electrostatic_work(phi, gp.B);
  const auto pin = dirichlet_nodes(g, gp.bc);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  WorkConsistency out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    ScalarField2 pert = phi;
    VecX d(g.n());
    for (int k = 0; k < g.n(); ++k) d[k] = pin[k] ? 0.0 : nd(rng);
    const double scale = std::pow(10.0, -(t % 7));
    pert.v += scale * d;
    const double decrease = w0 - electrostatic_work(pert, gp.B);
    out.max_decrease = std::max(out.max_decrease, decrease);
  }
  out.ok = out.max_decrease <= 1e-10;
  return out;
}

}  // namespace nematoplate
