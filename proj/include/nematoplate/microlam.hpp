#pragma once

#include <span>
#include <vector>

#include "nematoplate/qtensor.hpp"
#include "nematoplate/types.hpp"

namespace nematoplate {

struct LaminateParams {
  double eta = 0.01;   // laminate period
  double delta = 0.0;  // mollification width budget per period
  double rho = 0.1;    // grain boundary-layer width
  int grains = 1;
};

struct Stripe {
  double fraction = 0;  // width / eta
  QTensor value;
  Vec3 director;
};

/// Periodic 1D stripe decomposition of Frank tensors whose cell average is a
/// prescribed biaxial target.
struct LaminateField {
  double eta = 0;
  Vec3 normal = Vec3::UnitX();
  std::vector<Stripe> stripes;  // zero-weight variants dropped; fractions sum to 1

  QTensor at(double t) const;  // profile coordinate, periodic with period eta
  QTensor at_point(const Vec3& x) const { return at(x.dot(normal)); }
  QTensor average() const;     // exact cell average
};

LaminateField laminate_profile(const QTensor& qbar, double eta, const Vec3& normal);

struct WeakConvergenceReport {
  std::vector<double> widths;
  std::vector<double> errors;  // Frobenius error of the windowed average
  double fitted_rate = 0;      // slope of log error against log(eta/width)
};

/// Windowed averages against the weak limit. Window widths are taken at
/// half-period offsets from the requested multiples of eta, because averages
/// over whole periods reproduce the target exactly.
WeakConvergenceReport weak_convergence_check(const LaminateField& lf, const QTensor& qbar,
                                             std::span<const double> window_factors = {});

/// Director-interpolated smooth version of a stripe profile. Values stay in
/// Q_Fr pointwise; the non-constant set has measure delta per period.
struct MollifiedLaminate {
  LaminateField base;
  double delta = 0;
  double half_width = 0;  // per-interface transition half width

  QTensor at(double t) const;
  Vec3 director_at(double t) const;
  double transition_fraction() const;  // exact: delta / eta
  double curvature_integral() const;   // int |dQ/dt|^2 per unit length (closed form)
};

MollifiedLaminate mollify_laminate(const LaminateField& lf, double delta);

/// Continuous piecewise-affine map whose symmetric gradient laminates between
/// two Frank variants through the rank-one connection
/// n(x)n - m(x)m = (n+m) (x)_s (n-m).
struct TwoVariantDisplacement {
  Vec3 n, m;
  double fraction = 0.5;
  double eta = 1.0;
  bool degenerate = false;  // parallel directors: constant-gradient field
  Vec3 a = Vec3::Zero();    // rank-one amplitude (n+m)
  Vec3 b = Vec3::Zero();    // unscaled jump direction (n-m)
  Vec3 interface_normal = Vec3::UnitX();

  Vec3 eval(const Vec3& x) const;
  Mat3 gradient_in(int variant) const;  // 1 or 2
  QTensor sym_gradient_in(int variant) const;
};

TwoVariantDisplacement two_variant_displacement(const Vec3& n, const Vec3& m,
                                                double fraction, double eta);

}  // namespace nematoplate
