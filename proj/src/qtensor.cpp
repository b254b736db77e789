#include "nematoplate/qtensor.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nematoplate {

Mat3 QTensor::mat() const {
  Mat3 m;
  m << xx, xy, xz, xy, yy, yz, xz, yz, zz;
  return m;
}

QTensor QTensor::from_mat(const Mat3& m) {
  QTensor q;
  q.xx = m(0, 0);
  q.yy = m(1, 1);
  q.zz = m(2, 2);
  q.xy = 0.5 * (m(0, 1) + m(1, 0));
  q.xz = 0.5 * (m(0, 2) + m(2, 0));
  q.yz = 0.5 * (m(1, 2) + m(2, 1));
  return q;
}

double QTensor::norm2() const {
  return xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz);
}

double QTensor::dot(const QTensor& o) const {
  return xx * o.xx + yy * o.yy + zz * o.zz + 2.0 * (xy * o.xy + xz * o.xz + yz * o.yz);
}

QTensor QTensor::operator+(const QTensor& o) const {
  return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
}

QTensor QTensor::operator-(const QTensor& o) const {
  return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, xz - o.xz, yz - o.yz};
}

QTensor QTensor::operator*(double s) const {
  return {xx * s, yy * s, zz * s, xy * s, xz * s, yz * s};
}

QTensor make_frank(const Vec3& n) {
  const double nn = n.norm();
  if (std::abs(nn - 1.0) > 1e-10)
    throw std::invalid_argument("make_frank: director must be a unit vector, |n| = " +
                                std::to_string(nn));
  const Vec3 u = n / nn;
  QTensor q;
  q.xx = u.x() * u.x() - 1.0 / 3.0;
  q.yy = u.y() * u.y() - 1.0 / 3.0;
  q.zz = u.z() * u.z() - 1.0 / 3.0;
  q.xy = u.x() * u.y();
  q.xz = u.x() * u.z();
  q.yz = u.y() * u.z();
  return q;
}

QTensor make_uniaxial(double s, const Vec3& n) {
  if (s < -0.5 - 1e-12 || s > 1.0 + 1e-12)
    throw std::invalid_argument("make_uniaxial: order parameter s = " + std::to_string(s) +
                                " outside [-1/2, 1]");
  return make_frank(n) * s;
}

namespace {

Vec3 sorted_eigs(const QTensor& q) { return eig_sym3(q.mat()).eigvals; }

}  // namespace

bool in_QB(const QTensor& q, double tol) {
  if (std::abs(q.trace()) > std::max(1e-12, tol)) return false;
  const Vec3 lam = sorted_eigs(q);
  return lam(2) >= kQBLower - tol && lam(0) <= kQBUpper + tol;
}

bool in_QU(const QTensor& q, double tol) {
  if (!in_QB(q, tol)) return false;
  const Vec3 lam = sorted_eigs(q);
  return std::min(lam(0) - lam(1), lam(1) - lam(2)) <= tol;
}

bool in_QFr(const QTensor& q, double tol) {
  if (std::abs(q.trace()) > std::max(1e-12, tol)) return false;
  const Vec3 lam = sorted_eigs(q);
  return std::abs(lam(0) - kQBUpper) <= tol && std::abs(lam(1) - kQBLower) <= tol &&
         std::abs(lam(2) - kQBLower) <= tol;
}

std::array<double, 3> project_eigs_QB(const std::array<double, 3>& lam) {
  // Exhaustive KKT active-set enumeration: each coordinate is free, pinned at
  // the lower bound, or pinned at the upper bound (27 patterns). The true
  // projection's pattern is among them, so the feasible candidate of minimal
  // distance is the projection.
  constexpr double lo = kQBLower, hi = kQBUpper;
  constexpr double feas_tol = 1e-12;
  std::array<double, 3> best{};
  double best_d = std::numeric_limits<double>::infinity();
  for (int pattern = 0; pattern < 27; ++pattern) {
    int s[3] = {pattern % 3, (pattern / 3) % 3, (pattern / 9) % 3};
    double fixed_sum = 0.0, free_sum = 0.0;
    int nfree = 0;
    for (int i = 0; i < 3; ++i) {
      if (s[i] == 1)
        fixed_sum += lo;
      else if (s[i] == 2)
        fixed_sum += hi;
      else {
        ++nfree;
        free_sum += lam[i];
      }
    }
    std::array<double, 3> y{};
    if (nfree == 0) {
      if (std::abs(fixed_sum) > feas_tol) continue;
      for (int i = 0; i < 3; ++i) y[i] = s[i] == 1 ? lo : hi;
    } else {
      const double mu = (free_sum + fixed_sum) / nfree;
      bool ok = true;
      for (int i = 0; i < 3; ++i) {
        if (s[i] == 1)
          y[i] = lo;
        else if (s[i] == 2)
          y[i] = hi;
        else {
          y[i] = lam[i] - mu;
          if (y[i] < lo - feas_tol || y[i] > hi + feas_tol) ok = false;
        }
      }
      if (!ok) continue;
    }
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d += (y[i] - lam[i]) * (y[i] - lam[i]);
    if (d < best_d) {
      best_d = d;
      best = y;
    }
  }
  return best;
}

QTensor project_QB(const Mat3& m) {
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8)
    std::cerr << "project_QB: symmetrizing input with asymmetry " << asym << "\n";
  const SpectralData sd = eig_sym3(m);
  const std::array<double, 3> lp =
      project_eigs_QB({sd.eigvals(0), sd.eigvals(1), sd.eigvals(2)});
  Mat3 p = Mat3::Zero();
  for (int k = 0; k < 3; ++k)
    p += lp[k] * (sd.eigvecs.col(k) * sd.eigvecs.col(k).transpose());
  return QTensor::from_mat(p);
}

Dist2Result dist2_QB(const Mat3& m) {
  const Mat3 ms = 0.5 * (m + m.transpose());
  const Mat3 r = ms - project_QB(m).mat();
  Dist2Result out;
  out.value = r.squaredNorm();
  out.gradient = 2.0 * r;
  return out;
}

FrankDecomposition frank_decomposition(const QTensor& q) {
  if (!in_QB(q)) {
    const Dist2Result d = dist2_QB(q.mat());
    std::ostringstream msg;
    msg << "frank_decomposition: tensor outside the De Gennes set, dist^2 = " << d.value;
    throw std::invalid_argument(msg.str());
  }
  const SpectralData sd = eig_sym3(q.mat());
  FrankDecomposition fd;
  for (int k = 0; k < 3; ++k) {
    fd.weights[k] = sd.eigvals(k) + 1.0 / 3.0;
    fd.directions[k] = sd.eigvecs.col(k);
  }
  return fd;
}

}  // namespace nematoplate
