#pragma once

#include <optional>
#include <vector>

#include "nematoplate/energy2d.hpp"
#include "nematoplate/gauss2d.hpp"

namespace nematoplate {

struct SolveReport {
  int iterations = 0;
  double grad_norm = 0.0;
  std::vector<double> energy_trace;
  double wall_time_s = 0.0;
  EnergyBreakdown at_opt;
  bool converged = false;
};

/// Affine Dirichlet datum for the reduced Gauss law; the Dirichlet edges come
/// from the BoundarySpec's phi entries.
struct Phi0Spec {
  double a0 = 0.0;
  Vec2 lin = Vec2::Zero();
};

struct ActuationSolution {
  PlateState state;
  ScalarField2 phi;  // empty grid when electrostatics is off
  SolveReport report;
};

/// Unique convex minimization of the actuation functional at frozen Q.
/// Thin regime solves in interface variables, thick in mid-section variables.
ActuationSolution minimize_actuation(const QTensor& qbar, const BoundarySpec& bc,
                                     const MaterialParams& mp, const DielectricParams& dp,
                                     const ScalingRegime& regime, const Grid2& grid,
                                     const std::optional<Phi0Spec>& phi0 = std::nullopt);

/// Coordinates over one of the admissible order-tensor sets.
struct QParametrization {
  enum class Set { frank, uniaxial, biaxial };
  Set set = Set::frank;

  int dim() const;
  QTensor decode(const VecX& coords, int chart) const;
  VecX encode(const QTensor& q, int* chart) const;
};

struct MinMaxBasin {
  double energy = 0.0;
  VecX coords;
  QTensor qbar;
};

struct MinMaxSolution {
  PlateState state;
  QTensor qbar;
  ScalarField2 phi;
  SolveReport report;
  std::vector<MinMaxBasin> basins;  // sorted, best first
};

/// Nested equilibrium search: minimizes over Q the inner minimum of the
/// actuation functional with the Gauss solution held at its fixed point.
MinMaxSolution solve_minmax(const BoundarySpec& bc, const Phi0Spec& phi0,
                            const QParametrization& qset, const MaterialParams& mp,
                            const DielectricParams& dp, const ScalingRegime& regime,
                            const Grid2& grid, int multistart = 8, unsigned seed = 1u);

struct RelaxedSolution {
  PlateState state;
  SolveReport report;
};

/// Convex minimization of the relaxed functional minus load work.
RelaxedSolution minimize_relaxed(const BoundarySpec& bc, const Loads& loads,
                                 const MaterialParams& mp, const ScalingRegime& regime,
                                 const Grid2& grid);

}  // namespace nematoplate
