#include "nematoplate/dielectric.hpp"

#include <stdexcept>
#include <string>

namespace nematoplate {

void DielectricParams::validate() const {
  if (!(eps_perp > 0.0) || !(eps_par > 0.0))
    throw std::invalid_argument("DielectricParams: permittivities must be positive");
}

Mat3 d_tensor(const QTensor& q, const DielectricParams& dp) {
  dp.validate();
  if (!in_QB(q))
    throw std::invalid_argument("d_tensor: Q outside the De Gennes set");
  const double iso = (2.0 * dp.eps_perp + dp.eps_par) / 3.0;
  return iso * Mat3::Identity() + (dp.eps_par - dp.eps_perp) * q.mat();
}

Mat2 schur_B(const Mat3& dbar) {
  if (dbar(2, 2) <= 1e-12)
    throw std::runtime_error("schur_B: singular transverse entry D33 = " +
                             std::to_string(dbar(2, 2)));
  Mat2 b;
  const double inv33 = 1.0 / dbar(2, 2);
  b(0, 0) = dbar(0, 0) - dbar(0, 2) * dbar(0, 2) * inv33;
  b(1, 1) = dbar(1, 1) - dbar(1, 2) * dbar(1, 2) * inv33;
  b(0, 1) = b(1, 0) = dbar(0, 1) - dbar(0, 2) * dbar(1, 2) * inv33;
  return b;
}

double c_star(const Mat3& dbar, const Vec2& g) {
  if (dbar(2, 2) <= 1e-12)
    throw std::runtime_error("c_star: singular transverse entry D33");
  return -(dbar(0, 2) * g.x() + dbar(1, 2) * g.y()) / dbar(2, 2);
}

}  // namespace nematoplate
