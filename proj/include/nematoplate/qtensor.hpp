#pragma once

#include <array>

#include "nematoplate/eig3.hpp"
#include "nematoplate/types.hpp"

namespace nematoplate {

/// Symmetric (traceless, for members of the order-tensor sets) 3x3 tensor,
/// stored as its six independent entries so that symmetry is exact.
struct QTensor {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  Mat3 mat() const;
  static QTensor from_mat(const Mat3& m);  // symmetrizes

  double trace() const { return xx + yy + zz; }
  double norm2() const;  // squared Frobenius norm
  double dot(const QTensor& o) const;

  QTensor operator+(const QTensor& o) const;
  QTensor operator-(const QTensor& o) const;
  QTensor operator*(double s) const;
};

constexpr double kQBLower = -1.0 / 3.0;
constexpr double kQBUpper = 2.0 / 3.0;
constexpr double kMembershipTol = 1e-8;

/// Q = n (x) n - I/3 for a unit director n.
QTensor make_frank(const Vec3& n);

/// Uniaxial tensor s (n (x) n - I/3), s in [-1/2, 1].
QTensor make_uniaxial(double s, const Vec3& n);

bool in_QB(const QTensor& q, double tol = kMembershipTol);
bool in_QU(const QTensor& q, double tol = kMembershipTol);
bool in_QFr(const QTensor& q, double tol = kMembershipTol);

/// Euclidean projection of an eigenvalue triple onto
/// { sum = 0, -1/3 <= l_i <= 2/3 }. Component order is preserved.
std::array<double, 3> project_eigs_QB(const std::array<double, 3>& lam);

/// Nearest tensor of the De Gennes set in the Frobenius metric.
QTensor project_QB(const Mat3& m);

struct Dist2Result {
  double value = 0;
  Mat3 gradient = Mat3::Zero();
};

/// Squared distance to the De Gennes set with its (C^1) gradient 2(M - P(M)).
Dist2Result dist2_QB(const Mat3& m);

/// Convex weights and frame writing Q in Q_B as sum mu_i (v_i (x) v_i - I/3).
struct FrankDecomposition {
  std::array<double, 3> weights;
  std::array<Vec3, 3> directions;
};

FrankDecomposition frank_decomposition(const QTensor& q);

}  // namespace nematoplate
