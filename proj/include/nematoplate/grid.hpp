#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nematoplate/types.hpp"

namespace nematoplate {

/// Structured rectangular grid of nodes on [0, lx] x [0, ly].
struct Grid2 {
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;

  int n() const { return nx * ny; }
  double hx() const { return lx / (nx - 1); }
  double hy() const { return ly / (ny - 1); }
  int idx(int i, int j) const { return j * nx + i; }  // row-major, x fastest
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  void validate() const;  // nx, ny >= 4 and positive extents
  bool operator==(const Grid2&) const = default;
};

struct ScalarField2 {
  Grid2 grid;
  VecX v;

  ScalarField2() = default;
  explicit ScalarField2(const Grid2& g) : grid(g), v(VecX::Zero(g.n())) {}
  static ScalarField2 from_function(const Grid2& g,
                                    const std::function<double(double, double)>& f);
};

/// Two-component nodal field stored as [component-1 plane | component-2 plane].
struct VectorField2 {
  Grid2 grid;
  VecX v;

  VectorField2() = default;
  explicit VectorField2(const Grid2& g) : grid(g), v(VecX::Zero(2 * g.n())) {}
  double u1(int k) const { return v[k]; }
  double u2(int k) const { return v[grid.n() + k]; }
  double& u1(int k) { return v[k]; }
  double& u2(int k) { return v[grid.n() + k]; }
  static VectorField2 from_function(
      const Grid2& g, const std::function<double(double, double)>& f1,
      const std::function<double(double, double)>& f2);
};

enum class EdgeBC { clamped, free_edge };
enum class PhiBC { dirichlet, natural };
enum class Edge { left, right, bottom, top };

/// Per-edge conditions for the plate fields and the electrostatic potential.
struct BoundarySpec {
  EdgeBC left = EdgeBC::clamped;
  EdgeBC right = EdgeBC::clamped;
  EdgeBC bottom = EdgeBC::clamped;
  EdgeBC top = EdgeBC::clamped;
  PhiBC phi_left = PhiBC::dirichlet;
  PhiBC phi_right = PhiBC::dirichlet;
  PhiBC phi_bottom = PhiBC::dirichlet;
  PhiBC phi_top = PhiBC::dirichlet;

  EdgeBC edge(Edge e) const;
  PhiBC phi_edge(Edge e) const;
  bool any_clamped() const;
  bool any_phi_dirichlet() const;
  static BoundarySpec all_free();
  static BoundarySpec all_clamped();
};

/// Sparse linear operator in CSR form with an exact transpose.
struct LinOp {
  int rows = 0, cols = 0;
  std::vector<int> ptr, col;
  std::vector<double> val;

  VecX apply(const VecX& x) const;
  VecX applyT(const VecX& x) const;
};

class LinOpBuilder {
 public:
  LinOpBuilder(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows) {}
  void add(int r, int c, double w) { entries_[r].emplace_back(c, w); }
  LinOp build() const;

 private:
  int rows_, cols_;
  std::vector<std::vector<std::pair<int, double>>> entries_;
};

/// d/dx and d/dy: central differences inside, one-sided second order on edges.
LinOp op_dx(const Grid2& g);
LinOp op_dy(const Grid2& g);

/// First derivatives of the transverse deflection: rows on clamped edges
/// normal to the direction are zero (the clamp pins the normal slope).
LinOp op_dx_clamped(const Grid2& g, EdgeBC lo, EdgeBC hi);
LinOp op_dy_clamped(const Grid2& g, EdgeBC lo, EdgeBC hi);

/// Second derivatives of the transverse deflection: 3-point compact stencil
/// inside, ghost-node mirror reflection on clamped edges, shifted one-sided
/// stencil on free edges. Exact on quadratics.
LinOp op_dxx(const Grid2& g, EdgeBC lo, EdgeBC hi);
LinOp op_dyy(const Grid2& g, EdgeBC lo, EdgeBC hi);

VecX trapezoid_weights(const Grid2& g);
double integrate2(const ScalarField2& f);

VectorField2 grad2(const ScalarField2& f);

/// Nodal symmetric Hessian (h11, h22, h12 planes) with free-edge one-sided
/// stencils; the mixed derivative is the symmetrized composition of the
/// first-derivative operators (4-point cross inside).
struct TensorField2 {
  Grid2 grid;
  VecX h11, h22, h12;
};
TensorField2 hessian2(const ScalarField2& f);

/// Degree-of-freedom map for the packed plate state [z1 | z2 | z3]:
/// nodes on clamped edges are pinned to zero.
struct DofMap {
  std::vector<std::uint8_t> pinned_node;  // size n
  int free_per_component = 0;
};
DofMap apply_clamped(const Grid2& g, const BoundarySpec& bc);

}  // namespace nematoplate
