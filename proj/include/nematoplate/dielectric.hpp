#pragma once

#include "nematoplate/qtensor.hpp"
#include "nematoplate/types.hpp"

namespace nematoplate {

struct DielectricParams {
  double eps_perp = 1.0;
  double eps_par = 4.0;
  double eps0 = 8.8541878128e-12;  // reporting only; solves are nondimensional

  void validate() const;
};

/// Nondimensional dielectric tensor D(Q) = (2 e_perp + e_par)/3 I + (e_par - e_perp) Q.
Mat3 d_tensor(const QTensor& q, const DielectricParams& dp);

/// Schur complement of the 33 entry: B_ab = D_ab - D_a3 D_b3 / D_33.
Mat2 schur_B(const Mat3& dbar);

/// Transverse field component minimizing (g, c)^T D (g, c) over c.
double c_star(const Mat3& dbar, const Vec2& g);

}  // namespace nematoplate
