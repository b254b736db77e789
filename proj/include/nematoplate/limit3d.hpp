#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nematoplate/dielectric.hpp"
#include "nematoplate/energy2d.hpp"
#include "nematoplate/gauss2d.hpp"
#include "nematoplate/microlam.hpp"

namespace nematoplate {

/// Structured grid on omega x (z0, z1). nz must be odd (Simpson rule in z).
struct Grid3 {
  int nx = 0, ny = 0, nz = 0;
  double lx = 1.0, ly = 1.0;
  double z0 = 0.0, z1 = 1.0;

  int n() const { return nx * ny * nz; }
  double hx() const { return lx / (nx - 1); }
  double hy() const { return ly / (ny - 1); }
  double hz() const { return (z1 - z0) / (nz - 1); }
  int idx(int i, int j, int k) const { return (k * ny + j) * nx + i; }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  double z(int k) const { return z0 + k * hz(); }
  Grid2 slice() const { return Grid2{nx, ny, lx, ly}; }
  void validate() const;

  static Grid3 film(const Grid2& g, int nz) { return {g.nx, g.ny, nz, g.lx, g.ly, 0.0, 1.0}; }
  static Grid3 bonding(const Grid2& g, int nz) {
    return {g.nx, g.ny, nz, g.lx, g.ly, -1.0, 0.0};
  }
};

/// Nodal 3D fields of the rescaled bilayer. Empty arrays mean the
/// corresponding layer or field is absent (and contributes zero).
struct Field3 {
  Grid3 film;
  Grid3 bond;
  VecX v_film;   // 3 component planes on the film grid
  VecX v_bond;   // 3 component planes on the bonding grid
  VecX q_bond;   // 6 planes: xx, yy, zz, xy, xz, yz
  VecX phi_bond; // 1 plane
};

struct Energy3Breakdown {
  double film = 0;
  double bonding = 0;
  double frank = 0;
  double electrostatic = 0;
  double total = 0;
};

/// Scaled bilayer energy J^p_eps evaluated on nodal fields with the exact
/// eps^-1, eps^-2, eps^{p+1}, eps^-p derivative factors of the rescaled model.
Energy3Breakdown assemble_j3d(double p, double eps, const Field3& f,
                              const MaterialParams& mp, const DielectricParams& dp,
                              double delta_eps);

/// Kirchhoff-Love recovery profile in the film: v' = zeta' - x3 grad zeta3,
/// v3 = zeta3 + eps^2 h with d3 h = -nu/(1-nu) tr(e' - x3 H).
Field3 recovery_film(const PlateState& zeta, double eps, const MaterialParams& mp,
                     int nz_film);

struct Gauss3Result {
  VecX phi;
  double work = 0;
  GaussStats stats;
};

/// Trilinear-cell solve of the rescaled 3D Gauss law with lateral Dirichlet
/// data phi0 (affine in x') and natural top/bottom faces. Desk-scale only.
Gauss3Result gauss3d_desk(double p, double eps, const Grid3& bond,
                          const std::function<QTensor(const Vec3&)>& qfield,
                          const DielectricParams& dp, double phi0_const,
                          const Vec2& phi0_lin, const BoundarySpec& bc);

/// Average over x3 of the scaled transverse derivative eps^-(p+1) d3 phi;
/// converges to the pointwise minimizer c* of the transverse energy.
VecX transverse_average_scaled_dz(const Grid3& g, const VecX& phi, double p, double eps);

struct GammaTrendRow {
  double eps = 0;
  double j3d = 0;
  double j2d = 0;
  double gap = 0;
};

struct UpperBoundKnobs {
  double eta_pow = 2.0;        // eta = eps^eta_pow
  double delta_pow = 3.0;      // delta = eps^delta_pow
  // Frank scale delta_eps = eps^delta_eps_pow. The mollified-laminate
  // curvature costs delta_eps^2/(delta eta), so the exponent must exceed
  // (eta_pow + delta_pow)/2 for the cost to vanish along the sequence.
  double delta_eps_pow = 3.0;
  double rho = 0.15;           // cutoff boundary-layer width
  int nz_film = 9;             // film grid resolution for the recovery energy
};

/// Energy of the combined recovery sequence (film profile + two-variant Frank
/// laminate in the bonding layer) against its 2D limit value. The laminate
/// oscillates below any desk-scale mesh, so its contribution is integrated by
/// exact averaging over the fast variable (periodic profile statistics); slow
/// fields are integrated on the grid.
std::vector<GammaTrendRow> upper_bound_trend(const PlateState& zeta, const Vec3& n1,
                                             const Vec3& n2, double fraction,
                                             std::span<const double> eps_list,
                                             const MaterialParams& mp, double p,
                                             const UpperBoundKnobs& knobs = {});

}  // namespace nematoplate
