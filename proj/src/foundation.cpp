#include "nematoplate/foundation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nematoplate {

void MaterialParams::validate() const {
  if (!(nu > -1.0 && nu < 0.5))
    throw std::invalid_argument("MaterialParams: nu = " + std::to_string(nu) +
                                " outside (-1, 1/2)");
  if (std::abs(1.0 - 2.0 * nu) < 1e-6)
    throw std::invalid_argument("MaterialParams: incompressible limit nu = 1/2 not modeled");
}

double MaterialParams::trace_coeff() const {
  validate();
  return nu / (1.0 - 2.0 * nu);
}

double MaterialParams::plane_trace_coeff() const {
  validate();
  return nu / (1.0 - nu);
}

Mat3 k_matrix(const Vec2& zp, double z3) {
  Mat3 k = Mat3::Zero();
  k(0, 2) = k(2, 0) = 0.5 * zp.x();
  k(1, 2) = k(2, 1) = 0.5 * zp.y();
  k(2, 2) = z3;
  return k;
}

DensityEval relaxed_density(const FoundationSample& s, const MaterialParams& mp) {
  const double tc = mp.trace_coeff();
  const bool thin = s.regime == LayerRegime::thin;
  const Mat3 k = k_matrix(thin ? s.zeta_prime : Vec2::Zero().eval(), s.zeta3);
  const Dist2Result d = dist2_QB(k);

  DensityEval out;
  out.value = d.value + tc * s.zeta3 * s.zeta3;
  // Chain rule through K: dK/dzeta_a touches the symmetric pair (a,3),
  // dK/dzeta3 the (3,3) entry.
  if (thin) out.d_zeta_prime = Vec2(d.gradient(0, 2), d.gradient(1, 2));
  out.d_zeta3 = d.gradient(2, 2) + 2.0 * tc * s.zeta3;
  return out;
}

DensityEval frozen_density(const FoundationSample& s, const QTensor& qbar,
                           const MaterialParams& mp) {
  const double tc = mp.trace_coeff();
  if (!in_QB(qbar))
    throw std::invalid_argument("frozen_density: Q outside the admissible tensor sets");

  const double qplane2 = qbar.xx * qbar.xx + qbar.yy * qbar.yy + 2.0 * qbar.xy * qbar.xy;
  const Vec2 q3(qbar.xz, qbar.yz);
  const bool thin = s.regime == LayerRegime::thin;

  DensityEval out;
  const double vert = s.zeta3 - qbar.zz;
  if (thin) {
    const Vec2 shear = 0.5 * s.zeta_prime - q3;
    out.value = qplane2 + 2.0 * shear.squaredNorm() + vert * vert + tc * s.zeta3 * s.zeta3;
    out.d_zeta_prime = 2.0 * shear;
  } else {
    out.value = qplane2 + 2.0 * q3.squaredNorm() + vert * vert + tc * s.zeta3 * s.zeta3;
  }
  out.d_zeta3 = 2.0 * vert + 2.0 * tc * s.zeta3;
  return out;
}

}  // namespace nematoplate
