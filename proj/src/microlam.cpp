#include "nematoplate/microlam.hpp"

#include <cmath>
#include <stdexcept>

namespace nematoplate {

namespace {

double wrap_period(double t, double period) {
  double s = std::fmod(t, period);
  if (s < 0) s += period;
  return s;
}

// Quintic smoothstep and the integral of its squared derivative on [0,1].
double smoothstep5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
constexpr double kSmoothstepDerivSq = 10.0 / 7.0;  // int_0^1 s'(u)^2 du

}  // namespace

QTensor LaminateField::at(double t) const {
  const double s = wrap_period(t, eta);
  double acc = 0;
  for (const Stripe& st : stripes) {
    acc += st.fraction * eta;
    if (s < acc) return st.value;
  }
  return stripes.back().value;
}

QTensor LaminateField::average() const {
  QTensor q;
  for (const Stripe& st : stripes) q = q + st.value * st.fraction;
  return q;
}

LaminateField laminate_profile(const QTensor& qbar, double eta, const Vec3& normal) {
  if (!(eta > 0)) throw std::invalid_argument("laminate_profile: eta must be positive");
  const FrankDecomposition fd = frank_decomposition(qbar);  // validates membership
  LaminateField lf;
  lf.eta = eta;
  lf.normal = normal.normalized();
  for (int k = 0; k < 3; ++k) {
    if (fd.weights[k] < 1e-14) continue;
    Stripe st;
    st.fraction = fd.weights[k];
    st.director = fd.directions[k];
    st.value = make_frank(st.director);
    lf.stripes.push_back(st);
  }
  // Exact unit total: fold the (tiny) weight defect into the widest stripe.
  double total = 0;
  for (const Stripe& st : lf.stripes) total += st.fraction;
  lf.stripes.front().fraction += 1.0 - total;
  return lf;
}

WeakConvergenceReport weak_convergence_check(const LaminateField& lf, const QTensor& qbar,
                                             std::span<const double> window_factors) {
  static const double defaults[] = {4.5, 16.5, 64.5};
  if (window_factors.empty()) window_factors = defaults;

  // Exact cumulative integral of the piecewise-constant periodic profile.
  const QTensor period_avg = lf.average();
  auto cumulative = [&](double t) {
    const double whole = std::floor(t / lf.eta);
    const double s = t - whole * lf.eta;
    QTensor acc = period_avg * (whole * lf.eta);
    double a = 0;
    for (const Stripe& st : lf.stripes) {
      const double b = a + st.fraction * lf.eta;
      const double overlap = std::clamp(s, a, b) - a;
      if (overlap > 0) acc = acc + st.value * overlap;
      a = b;
    }
    return acc;
  };

  WeakConvergenceReport rep;
  for (double factor : window_factors) {
    const double w = factor * lf.eta;
    const double t0 = 0.37 * lf.eta;  // generic phase
    const QTensor avg = (cumulative(t0 + w) - cumulative(t0)) * (1.0 / w);
    rep.widths.push_back(w);
    rep.errors.push_back(std::sqrt((avg - qbar).norm2()));
  }

  // Least-squares slope of log(error) against log(eta / width).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (std::size_t k = 0; k < rep.widths.size(); ++k) {
    if (rep.errors[k] <= 1e-15) continue;
    const double x = std::log(lf.eta / rep.widths[k]);
    const double y = std::log(rep.errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  rep.fitted_rate = npts >= 2 ? (npts * sxy - sx * sy) / (npts * sxx - sx * sx) : 0.0;
  return rep;
}

Vec3 MollifiedLaminate::director_at(double t) const {
  const double s = wrap_period(t, base.eta);
  const int ns = static_cast<int>(base.stripes.size());
  // Stripe boundaries within one period.
  double acc = 0;
  for (int k = 0; k < ns; ++k) {
    const double start = acc;
    acc += base.stripes[k].fraction * base.eta;
    if (s >= acc) continue;
    const Vec3 u = base.stripes[k].director;
    // Transitions are centered on the stripe interfaces.
    if (s < start + half_width && ns > 1) {
      const Vec3 prev = base.stripes[(k + ns - 1) % ns].director;
      const double blend = 0.5 + 0.5 * (s - start) / half_width;  // in [1/2, 1]
      // Rotate from prev towards u; pick the sign that gives the short arc.
      Vec3 v = u.dot(prev) >= 0 ? u : (-u).eval();
      const double angle = std::acos(std::clamp(prev.dot(v), -1.0, 1.0));
      Vec3 axis_dir = v - prev.dot(v) * prev;
      if (axis_dir.norm() < 1e-14) return u;
      axis_dir.normalize();
      const double psi = smoothstep5(blend) * angle;
      return (std::cos(psi) * prev + std::sin(psi) * axis_dir).normalized();
    }
    if (s > acc - half_width && ns > 1) {
      const Vec3 next = base.stripes[(k + 1) % ns].director;
      const double blend = 0.5 * (s - (acc - half_width)) / half_width;  // in [0, 1/2]
      Vec3 v = next.dot(u) >= 0 ? next : (-next).eval();
      const double angle = std::acos(std::clamp(u.dot(v), -1.0, 1.0));
      Vec3 axis_dir = v - u.dot(v) * u;
      if (axis_dir.norm() < 1e-14) return u;
      axis_dir.normalize();
      const double psi = smoothstep5(blend) * angle;
      return (std::cos(psi) * u + std::sin(psi) * axis_dir).normalized();
    }
    return u;
  }
  return base.stripes.back().director;
}

QTensor MollifiedLaminate::at(double t) const { return make_frank(director_at(t)); }

double MollifiedLaminate::transition_fraction() const {
  return base.stripes.size() > 1 ? delta / base.eta : 0.0;
}

double MollifiedLaminate::curvature_integral() const {
  // |dQ/dt|^2 = 2 |dn/dt|^2 for unit directors, and each transition sweeps its
  // arc with the smoothstep profile over width 2 * half_width.
  if (base.stripes.size() < 2) return 0.0;
  const int ns = static_cast<int>(base.stripes.size());
  double per_period = 0;
  for (int k = 0; k < ns; ++k) {
    const Vec3 u = base.stripes[k].director;
    Vec3 v = base.stripes[(k + 1) % ns].director;
    if (v.dot(u) < 0) v = -v;
    const double angle = std::acos(std::clamp(u.dot(v), -1.0, 1.0));
    per_period += 2.0 * angle * angle * kSmoothstepDerivSq / (2.0 * half_width);
  }
  return per_period / base.eta;
}

MollifiedLaminate mollify_laminate(const LaminateField& lf, double delta) {
  if (!(delta < lf.eta / 4.0))
    throw std::invalid_argument("mollify_laminate: delta >= eta/4, stripes merge");
  MollifiedLaminate ml;
  ml.base = lf;
  ml.delta = delta;
  const int ns = static_cast<int>(lf.stripes.size());
  ml.half_width = ns > 1 ? delta / (2.0 * ns) : 0.0;
  for (const Stripe& st : lf.stripes)
    if (ns > 1 && st.fraction * lf.eta < 2.0 * ml.half_width)
      throw std::invalid_argument("mollify_laminate: a stripe is narrower than its blends");
  return ml;
}

Vec3 TwoVariantDisplacement::eval(const Vec3& x) const {
  if (degenerate) return make_frank(n).mat() * x;
  // f(x) = Q2 x + g(x . nu) a with g' = |b| on variant-1 stripes, so that
  // grad f jumps by a (x) b across interfaces with normal nu = b/|b|.
  const double t = x.dot(interface_normal);
  const double s = wrap_period(t, eta);
  const double whole = std::round((t - s) / eta);
  const double width1 = fraction * eta;
  const double g = b.norm() * (whole * width1 + std::min(s, width1));
  return make_frank(m).mat() * x + g * a;
}

Mat3 TwoVariantDisplacement::gradient_in(int variant) const {
  if (degenerate) return make_frank(n).mat();
  const Mat3 base = make_frank(m).mat();
  if (variant == 1) return base + a * b.transpose();
  return base;
}

QTensor TwoVariantDisplacement::sym_gradient_in(int variant) const {
  return QTensor::from_mat(gradient_in(variant));
}

TwoVariantDisplacement two_variant_displacement(const Vec3& n, const Vec3& m,
                                                double fraction, double eta) {
  if (!(eta > 0))
    throw std::invalid_argument("two_variant_displacement: eta must be positive");
  if (!(fraction > 0 && fraction < 1))
    throw std::invalid_argument("two_variant_displacement: fraction must lie in (0,1)");
  TwoVariantDisplacement tv;
  tv.n = n.normalized();
  tv.m = m.normalized();
  tv.fraction = fraction;
  tv.eta = eta;
  if (tv.n.cross(tv.m).norm() < 1e-12) {
    tv.degenerate = true;
    return tv;
  }
  tv.a = tv.n + tv.m;
  tv.b = tv.n - tv.m;
  tv.interface_normal = tv.b.normalized();
  return tv;
}

}  // namespace nematoplate
