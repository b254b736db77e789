#pragma once

#include "nematoplate/qtensor.hpp"
#include "nematoplate/types.hpp"

namespace nematoplate {

/// Thickness scaling of the nematic layer: thin couples in-plane shear to the
/// foundation (p = 0), thick does not (-1 < p < 0).
enum class LayerRegime { thin, thick };

/// Elastic constants, with the stiffness gauge E/(1+nu) = 1.
struct MaterialParams {
  double nu = 0.3;

  void validate() const;              // nu in (-1, 1/2), |1-2nu| bounded away from 0
  double trace_coeff() const;         // nu / (1 - 2 nu)
  double plane_trace_coeff() const;   // nu / (1 - nu)
  bool convex_range() const { return nu >= 0.0 && nu < 0.5; }
};

/// Pointwise interface displacement sample entering the foundation.
struct FoundationSample {
  Vec2 zeta_prime = Vec2::Zero();
  double zeta3 = 0;
  LayerRegime regime = LayerRegime::thin;
};

/// The interface strain matrix K(zeta', zeta3).
Mat3 k_matrix(const Vec2& zeta_prime, double zeta3);

struct DensityEval {
  double value = 0;
  Vec2 d_zeta_prime = Vec2::Zero();
  double d_zeta3 = 0;
};

/// Relaxed foundation density dist^2(K, Q_B) + nu/(1-2nu) zeta3^2.
/// The thick regime evaluates K(0, zeta3); zeta' is ignored there.
DensityEval relaxed_density(const FoundationSample& s, const MaterialParams& mp);

/// Frozen-tensor foundation density of the actuation regime,
/// |Q'|^2 + 2|zeta'/2 - (Q e3)'|^2 + (zeta3 - Q33)^2 + nu/(1-2nu) zeta3^2,
/// with the shear term replaced by 2|(Q e3)'|^2 in the thick regime.
DensityEval frozen_density(const FoundationSample& s, const QTensor& qbar,
                           const MaterialParams& mp);

}  // namespace nematoplate
