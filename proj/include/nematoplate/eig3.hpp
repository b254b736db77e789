#pragma once

#include "nematoplate/types.hpp"

namespace nematoplate {

/// Spectral decomposition of a symmetric 3x3 matrix.
/// eigvals sorted descending; eigvecs.col(k) is the unit eigenvector of eigvals[k].
struct SpectralData {
  Vec3 eigvals;
  Mat3 eigvecs;
};

/// Closed-form (trigonometric) eigensolve with Jacobi refinement sweeps.
/// The input is symmetrized; any orthonormal eigenbasis is returned for
/// repeated eigenvalues.
SpectralData eig_sym3(const Mat3& m);

}  // namespace nematoplate
