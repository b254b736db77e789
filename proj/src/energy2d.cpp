#include "nematoplate/energy2d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematoplate/gauss2d.hpp"
#include "nematoplate/runtime.hpp"

namespace nematoplate {

PlateState PlateState::zero(const Grid2& g, Representation r) {
  PlateState ps;
  ps.zeta_prime = VectorField2(g);
  ps.zeta3 = ScalarField2(g);
  ps.rep = r;
  return ps;
}

double ScalingRegime::phi0_gauge(double eps0) const {
  return L * std::pow(eps, -1.0 - 0.5 * p) / std::sqrt(eps0);
}

double ScalingRegime::delta_tilde() const {
  // delta_eps^2 = delta_tilde^2 / (L^2 eps^{2p+2})
  return delta_eps * L * std::pow(eps, p + 1.0);
}

double ScalingRegime::frank_constant() const {
  const double dt = delta_tilde();
  return std::pow(eps, q()) * dt * dt;
}

void ScalingRegime::validate() const {
  if (!(p > -1.0 && p <= 0.0))
    throw std::invalid_argument("ScalingRegime: p must lie in (-1, 0]");
  if (!(eps > 0.0)) throw std::invalid_argument("ScalingRegime: eps must be positive");
}

ScalingRegime ScalingRegime::thin(Flavor f) {
  ScalingRegime r;
  r.p = 0.0;
  r.flavor = f;
  return r;
}

ScalingRegime ScalingRegime::thick(double p, Flavor f) {
  ScalingRegime r;
  r.p = p;
  r.flavor = f;
  r.validate();
  return r;
}

PlateOps PlateOps::make(const Grid2& g, const BoundarySpec& bc) {
  PlateOps ops;
  ops.grid = g;
  ops.bc = bc;
  ops.dx = op_dx(g);
  ops.dy = op_dy(g);
  ops.gx3 = op_dx_clamped(g, bc.left, bc.right);
  ops.gy3 = op_dy_clamped(g, bc.bottom, bc.top);
  ops.hxx = op_dxx(g, bc.left, bc.right);
  ops.hyy = op_dyy(g, bc.bottom, bc.top);
  ops.w = trapezoid_weights(g);
  return ops;
}

namespace {

struct Strains {
  VecX e11, e22, e12, h11, h22, h12;
  VecX gy3z, gx3z;  // kept for the transposed mixed-derivative assembly
};

Strains compute_strains(const PlateState& ps, const PlateOps& ops) {
  const int n = ops.grid.n();
  const VecX z1 = ps.zeta_prime.v.head(n);
  const VecX z2 = ps.zeta_prime.v.tail(n);
  const VecX& z3 = ps.zeta3.v;
  Strains s;
  s.e11 = ops.dx.apply(z1);
  s.e22 = ops.dy.apply(z2);
  s.e12 = 0.5 * (ops.dy.apply(z1) + ops.dx.apply(z2));
  s.h11 = ops.hxx.apply(z3);
  s.h22 = ops.hyy.apply(z3);
  s.gx3z = ops.gx3.apply(z3);
  s.gy3z = ops.gy3.apply(z3);
  s.h12 = 0.5 * (ops.gx3.apply(s.gy3z) + ops.gy3.apply(s.gx3z));
  return s;
}

// Film energy core. `cross_coeff` multiplies the membrane-bending coupling
// (1 interface form, 0 none) and `bend_coeff` the |H|^2 block (1/3 or 1/12).
EnergyResult film_core(const PlateState& ps, const MaterialParams& mp, const PlateOps& ops,
                       double cross_coeff, double bend_coeff) {
  const int n = ops.grid.n();
  const double c1 = mp.plane_trace_coeff();
  const Strains s = compute_strains(ps, ops);

  VecX p11(n), p22(n), p12(n), q11(n), q22(n), q12(n);
  EnergyResult out;
  out.grad = VecX::Zero(3 * n);
  double membrane = 0, cross = 0, bending = 0, trace = 0;
  for (int k = 0; k < n; ++k) {
    const double wk = 0.5 * ops.w[k];
    const double e11 = s.e11[k], e22 = s.e22[k], e12 = s.e12[k];
    const double h11 = s.h11[k], h22 = s.h22[k], h12 = s.h12[k];
    const double tre = e11 + e22, trh = h11 + h22;

    membrane += wk * (e11 * e11 + e22 * e22 + 2.0 * e12 * e12);
    cross -= wk * cross_coeff * (e11 * h11 + e22 * h22 + 2.0 * e12 * h12);
    bending += wk * bend_coeff * (h11 * h11 + h22 * h22 + 2.0 * h12 * h12);
    trace += wk * c1 * (tre * tre - cross_coeff * tre * trh + bend_coeff * trh * trh);

    const double dtre = c1 * (2.0 * tre - cross_coeff * trh);
    p11[k] = wk * (2.0 * e11 - cross_coeff * h11 + dtre);
    p22[k] = wk * (2.0 * e22 - cross_coeff * h22 + dtre);
    p12[k] = wk * (4.0 * e12 - 2.0 * cross_coeff * h12);
    const double dtrh = c1 * (-cross_coeff * tre + 2.0 * bend_coeff * trh);
    q11[k] = wk * (-cross_coeff * e11 + 2.0 * bend_coeff * h11 + dtrh);
    q22[k] = wk * (-cross_coeff * e22 + 2.0 * bend_coeff * h22 + dtrh);
    q12[k] = wk * (-2.0 * cross_coeff * e12 + 4.0 * bend_coeff * h12);
  }

  out.grad.segment(0, n) = ops.dx.applyT(p11) + 0.5 * ops.dy.applyT(p12);
  out.grad.segment(n, n) = ops.dy.applyT(p22) + 0.5 * ops.dx.applyT(p12);
  out.grad.segment(2 * n, n) =
      ops.hxx.applyT(q11) + ops.hyy.applyT(q22) +
      0.5 * (ops.gy3.applyT(ops.gx3.applyT(q12)) + ops.gx3.applyT(ops.gy3.applyT(q12)));

  out.bd.film_membrane = membrane;
  out.bd.film_cross = cross;
  out.bd.film_bending = bending;
  out.bd.film_trace = trace;
  out.value = out.bd.recompute_total();
  return out;
}

void require_rep(const PlateState& ps, Representation r, const char* who) {
  if (ps.rep != r)
    throw std::invalid_argument(std::string(who) + ": wrong state representation");
}

void require_thick(const ScalingRegime& regime, const char* who) {
  if (regime.layer() != LayerRegime::thick)
    throw std::invalid_argument(std::string(who) +
                                ": mid-section form is defined for the thick regime");
}

// Foundation terms integrate the density with unit weight; only the film and
// electrostatic terms carry the 1/2 prefactor.
void add_foundation_relaxed(EnergyResult& r, const PlateState& ps, const MaterialParams& mp,
                            LayerRegime layer, const PlateOps& ops) {
  const int n = ops.grid.n();
  // The pointwise projections dominate assembly cost; chunked so the optional
  // data-parallel mode stays bitwise identical to the serial one.
  std::vector<double> partial(chunk_count(n), 0.0);
  parallel_chunks(n, [&](int begin, int end) {
    double acc = 0;
    for (int k = begin; k < end; ++k) {
      FoundationSample smp;
      smp.zeta_prime = Vec2(ps.zeta_prime.u1(k), ps.zeta_prime.u2(k));
      smp.zeta3 = ps.zeta3.v[k];
      smp.regime = layer;
      const DensityEval d = relaxed_density(smp, mp);
      const double wk = ops.w[k];
      acc += wk * d.value;
      if (layer == LayerRegime::thin) {
        r.grad[k] += wk * d.d_zeta_prime.x();
        r.grad[n + k] += wk * d.d_zeta_prime.y();
      }
      r.grad[2 * n + k] += wk * d.d_zeta3;
    }
    partial[begin / kChunk] = acc;
  });
  double acc = 0;
  for (double v : partial) acc += v;
  r.bd.foundation = acc;
  r.value = r.bd.recompute_total();
}

void add_foundation_frozen(EnergyResult& r, const PlateState& ps, const QTensor& qbar,
                           const MaterialParams& mp, LayerRegime layer,
                           const PlateOps& ops) {
  if (!in_QB(qbar))
    throw std::invalid_argument("j_actuation: Q outside the admissible tensor sets");
  const int n = ops.grid.n();
  const double tc = mp.trace_coeff();
  const double qplane2 = qbar.xx * qbar.xx + qbar.yy * qbar.yy + 2.0 * qbar.xy * qbar.xy;
  const Vec2 q3(qbar.xz, qbar.yz);
  const bool thin = layer == LayerRegime::thin;

  double acc = 0;
  for (int k = 0; k < n; ++k) {
    const double wk = ops.w[k];
    const double z3 = ps.zeta3.v[k];
    const double vert = z3 - qbar.zz;
    if (thin) {
      const Vec2 shear = 0.5 * Vec2(ps.zeta_prime.u1(k), ps.zeta_prime.u2(k)) - q3;
      acc += wk * (qplane2 + 2.0 * shear.squaredNorm() + vert * vert + tc * z3 * z3);
      r.grad[k] += wk * 2.0 * shear.x();
      r.grad[n + k] += wk * 2.0 * shear.y();
    } else {
      acc += wk * (qplane2 + 2.0 * q3.squaredNorm() + vert * vert + tc * z3 * z3);
    }
    r.grad[2 * n + k] += wk * (2.0 * vert + 2.0 * tc * z3);
  }
  r.bd.foundation = acc;
  r.value = r.bd.recompute_total();
}

}  // namespace

EnergyResult film_energy(const PlateState& ps, const MaterialParams& mp,
                         const PlateOps& ops) {
  require_rep(ps, Representation::interface, "film_energy");
  return film_core(ps, mp, ops, 1.0, 1.0 / 3.0);
}

EnergyResult film_energy_midsection(const PlateState& ps, const MaterialParams& mp,
                                    const PlateOps& ops) {
  require_rep(ps, Representation::midsection, "film_energy_midsection");
  return film_core(ps, mp, ops, 0.0, 1.0 / 12.0);
}

EnergyResult j_relax(const PlateState& ps, const MaterialParams& mp,
                     const ScalingRegime& regime, const PlateOps& ops) {
  regime.validate();
  require_rep(ps, Representation::interface, "j_relax");
  EnergyResult r = film_core(ps, mp, ops, 1.0, 1.0 / 3.0);
  add_foundation_relaxed(r, ps, mp, regime.layer(), ops);
  return r;
}

EnergyResult j_relax_midsection(const PlateState& ps, const MaterialParams& mp,
                                const ScalingRegime& regime, const PlateOps& ops) {
  regime.validate();
  require_thick(regime, "j_relax_midsection");
  require_rep(ps, Representation::midsection, "j_relax_midsection");
  EnergyResult r = film_core(ps, mp, ops, 0.0, 1.0 / 12.0);
  add_foundation_relaxed(r, ps, mp, LayerRegime::thick, ops);
  return r;
}

EnergyResult j_actuation(const PlateState& ps, const QTensor& qbar,
                         const ScalarField2* phibar, const MaterialParams& mp,
                         const DielectricParams& dp, const ScalingRegime& regime,
                         const PlateOps& ops, const ActuationOptions& opts) {
  regime.validate();
  require_rep(ps, Representation::interface, "j_actuation");
  EnergyResult r = film_core(ps, mp, ops, opts.film_cross_term ? 1.0 : 0.0, 1.0 / 3.0);
  add_foundation_frozen(r, ps, qbar, mp, regime.layer(), ops);
  if (phibar) {
    const Mat2 b = schur_B(d_tensor(qbar, dp));
    r.bd.electrostatic = electrostatic_work(*phibar, b);
    r.value = r.bd.recompute_total();
  }
  return r;
}

EnergyResult j_actuation_midsection(const PlateState& ps, const QTensor& qbar,
                                    const ScalarField2* phibar, const MaterialParams& mp,
                                    const DielectricParams& dp, const ScalingRegime& regime,
                                    const PlateOps& ops) {
  regime.validate();
  require_thick(regime, "j_actuation_midsection");
  require_rep(ps, Representation::midsection, "j_actuation_midsection");
  EnergyResult r = film_core(ps, mp, ops, 0.0, 1.0 / 12.0);
  add_foundation_frozen(r, ps, qbar, mp, LayerRegime::thick, ops);
  if (phibar) {
    const Mat2 b = schur_B(d_tensor(qbar, dp));
    r.bd.electrostatic = electrostatic_work(*phibar, b);
    r.value = r.bd.recompute_total();
  }
  return r;
}

PlateState kl_shift(const PlateState& ps) {
  const VectorField2 gz3 = grad2(ps.zeta3);
  PlateState out = ps;
  const double sign = ps.rep == Representation::interface ? -1.0 : 1.0;
  out.zeta_prime.v += sign * 0.5 * gz3.v;
  out.rep = ps.rep == Representation::interface ? Representation::midsection
                                                : Representation::interface;
  return out;
}

Loads Loads::zero(const Grid2& g) {
  Loads l;
  l.fprime = VectorField2(g);
  l.f3 = ScalarField2(g);
  return l;
}

double load_work(const Loads& loads, const PlateState& ps) {
  if (loads.empty()) return 0.0;
  const Grid2& g = ps.zeta3.grid;
  const VecX w = trapezoid_weights(g);
  double acc = 0;
  for (int k = 0; k < g.n(); ++k) {
    double d = 0;
    if (loads.fprime.v.size() > 0)
      d += loads.fprime.u1(k) * ps.zeta_prime.u1(k) + loads.fprime.u2(k) * ps.zeta_prime.u2(k);
    if (loads.f3.v.size() > 0) d += loads.f3.v[k] * ps.zeta3.v[k];
    acc += w[k] * d;
  }
  return acc;
}

VecX load_work_gradient(const Loads& loads, const Grid2& g) {
  const int n = g.n();
  const VecX w = trapezoid_weights(g);
  VecX grad = VecX::Zero(3 * n);
  for (int k = 0; k < n; ++k) {
    if (loads.fprime.v.size() > 0) {
      grad[k] = w[k] * loads.fprime.u1(k);
      grad[n + k] = w[k] * loads.fprime.u2(k);
    }
    if (loads.f3.v.size() > 0) grad[2 * n + k] = w[k] * loads.f3.v[k];
  }
  return grad;
}

}  // namespace nematoplate
