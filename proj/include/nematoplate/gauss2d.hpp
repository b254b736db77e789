#pragma once

#include <optional>

#include "nematoplate/grid.hpp"
#include "nematoplate/types.hpp"

namespace nematoplate {

/// Reduced 2D Gauss law -div(B grad phi) = 0 with mixed Dirichlet/natural
/// boundary conditions and affine (or nodal) Dirichlet data.
struct GaussProblem {
  Mat2 B = Mat2::Identity();
  double phi0_const = 0.0;
  Vec2 phi0_lin = Vec2::Zero();          // phi0 = const + lin . x'
  std::optional<VecX> phi0_nodal;        // overrides the affine datum
  BoundarySpec bc;                       // phi_* edges select Dirichlet/natural

  double eval_phi0(const Grid2& g, int i, int j) const;
};

struct GaussStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate-gradient solve of the bilinear-cell discretization. The solution
/// exactly minimizes electrostatic_work over fields matching the Dirichlet
/// data, and reproduces affine solutions for constant B.
ScalarField2 solve_gauss(const GaussProblem& gp, const Grid2& g,
                         GaussStats* stats = nullptr);

/// 1/2 int grad(phi)^T B grad(phi), cell-exact for the bilinear interpolant.
double electrostatic_work(const ScalarField2& phi, const Mat2& B);

/// Nodal gradient of electrostatic_work.
VecX electrostatic_work_gradient(const ScalarField2& phi, const Mat2& B);

struct WorkConsistency {
  double max_decrease = 0.0;
  int trials = 0;
  bool ok = false;
};

/// Optimality certificate: random admissible perturbations of the Gauss
/// solution must not decrease the work beyond roundoff.
WorkConsistency min_work_consistency(const GaussProblem& gp, const Grid2& g,
                                     int trials = 32, unsigned seed = 7u);

}  // namespace nematoplate
