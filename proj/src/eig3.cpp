#include "nematoplate/eig3.hpp"

#include <cmath>

namespace nematoplate {

namespace {

// Eigenvalues by the trigonometric form of Cardano's formula, descending.
Vec3 eigvals_trig(const Mat3& a) {
  const double q = a.trace() / 3.0;
  Mat3 b = a - q * Mat3::Identity();
  const double p2 = b.squaredNorm() / 6.0;
  const double p = std::sqrt(p2);
  if (p < 1e-300) return Vec3(q, q, q);
  const Mat3 c = b / p;
  double half_det = 0.5 * c.determinant();
  half_det = std::clamp(half_det, -1.0, 1.0);
  const double phi = std::acos(half_det) / 3.0;
  const double l0 = q + 2.0 * p * std::cos(phi);
  const double l2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double l1 = 3.0 * q - l0 - l2;
  return Vec3(l0, l1, l2);
}

// Eigenvector of an isolated eigenvalue via row cross products of (a - lam I).
// Returns false if every cross product is too small (degenerate eigenvalue).
bool eigvec_cross(const Mat3& a, double lam, double scale, Vec3& out) {
  Mat3 m = a - lam * Mat3::Identity();
  Vec3 best = Vec3::Zero();
  double best_n2 = 0.0;
  const int rows[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (auto [r0, r1] : rows) {
    Vec3 c = m.row(r0).cross(m.row(r1));
    const double n2 = c.squaredNorm();
    if (n2 > best_n2) {
      best_n2 = n2;
      best = c;
    }
  }
  const double floor2 = 1e-24 * scale * scale * scale * scale;
  if (best_n2 <= floor2) return false;
  out = best / std::sqrt(best_n2);
  return true;
}

// Any unit vector orthogonal to v.
Vec3 orthogonal_unit(const Vec3& v) {
  Vec3 t = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 u = t - v.dot(t) * v;
  return u.normalized();
}

// One cyclic Jacobi sweep on t (symmetric), rotations accumulated into v.
// Returns the remaining off-diagonal magnitude.
double jacobi_sweep(Mat3& t, Mat3& v) {
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (auto [p, q] : pairs) {
    const double apq = t(p, q);
    if (std::abs(apq) < 1e-300) continue;
    const double theta = (t(q, q) - t(p, p)) / (2.0 * apq);
    const double tt =
        std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(tt * tt + 1.0);
    const double s = tt * c;
    Mat3 j = Mat3::Identity();
    j(p, p) = c;
    j(q, q) = c;
    j(p, q) = s;
    j(q, p) = -s;
    t = (j.transpose() * t * j).eval();
    t = (0.5 * (t + t.transpose())).eval();
    v = (v * j).eval();
  }
  return std::abs(t(0, 1)) + std::abs(t(0, 2)) + std::abs(t(1, 2));
}

}  // namespace

SpectralData eig_sym3(const Mat3& m) {
  const Mat3 a = 0.5 * (m + m.transpose());
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {Vec3::Zero(), Mat3::Identity()};
  const Mat3 as = a / scale;

  Vec3 lam = eigvals_trig(as);
  Mat3 v;

  // Attach the most isolated eigenvalue first; it has a well-conditioned
  // cross-product eigenvector. The remaining pair is diagonalized in the
  // orthogonal complement, which handles repeated eigenvalues cleanly.
  const double gap01 = lam(0) - lam(1);
  const double gap12 = lam(1) - lam(2);
  const int iso = gap01 >= gap12 ? 0 : 2;

  Vec3 viso;
  if (!eigvec_cross(as, lam(iso), 1.0, viso)) {
    // Near-spherical spectrum: any frame diagonalizes up to refinement.
    viso = Vec3::UnitZ();
  }
  Vec3 u = orthogonal_unit(viso);
  Vec3 w = viso.cross(u);

  // 2x2 diagonalization of as restricted to span{u, w}.
  const double auu = u.dot(as * u);
  const double aww = w.dot(as * w);
  const double auw = u.dot(as * w);
  double cth = 1.0, sth = 0.0;
  if (std::abs(auw) > 1e-300) {
    const double theta = (aww - auu) / (2.0 * auw);
    const double tt =
        std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    cth = 1.0 / std::sqrt(tt * tt + 1.0);
    sth = tt * cth;
  }
  Vec3 p1 = cth * u - sth * w;
  Vec3 p2 = sth * u + cth * w;
  const double l1 = p1.dot(as * p1);
  const double l2 = p2.dot(as * p2);

  Vec3 vals;
  if (iso == 0) {
    vals = Vec3(lam(0), std::max(l1, l2), std::min(l1, l2));
    v.col(0) = viso;
    v.col(1) = l1 >= l2 ? p1 : p2;
    v.col(2) = l1 >= l2 ? p2 : p1;
  } else {
    vals = Vec3(std::max(l1, l2), std::min(l1, l2), lam(2));
    v.col(0) = l1 >= l2 ? p1 : p2;
    v.col(1) = l1 >= l2 ? p2 : p1;
    v.col(2) = viso;
  }

  // Refinement: one Jacobi sweep always, more only if the residual demands it.
  Mat3 t = v.transpose() * as * v;
  t = 0.5 * (t + t.transpose());
  double off = jacobi_sweep(t, v);
  for (int k = 0; k < 8 && off > 1e-14; ++k) off = jacobi_sweep(t, v);

  SpectralData sd;
  Vec3 d(t(0, 0), t(1, 1), t(2, 2));
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int i, int j) { return d(i) > d(j); });
  for (int k = 0; k < 3; ++k) {
    sd.eigvals(k) = d(order[k]) * scale;
    Vec3 col = v.col(order[k]).normalized();
    // Deterministic sign: largest-magnitude component positive.
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0) col = -col;
    sd.eigvecs.col(k) = col;
  }
  return sd;
}

}  // namespace nematoplate
