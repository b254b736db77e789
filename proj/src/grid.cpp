#include "nematoplate/grid.hpp"

#include <stdexcept>

namespace nematoplate {

void Grid2::validate() const {
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("Grid2: need at least 4 nodes per direction");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("Grid2: extents must be positive");
}

ScalarField2 ScalarField2::from_function(const Grid2& g,
                                         const std::function<double(double, double)>& f) {
  ScalarField2 out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.v[g.idx(i, j)] = f(g.x(i), g.y(j));
  return out;
}

VectorField2 VectorField2::from_function(const Grid2& g,
                                         const std::function<double(double, double)>& f1,
                                         const std::function<double(double, double)>& f2) {
  VectorField2 out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.u1(g.idx(i, j)) = f1(g.x(i), g.y(j));
      out.u2(g.idx(i, j)) = f2(g.x(i), g.y(j));
    }
  return out;
}

EdgeBC BoundarySpec::edge(Edge e) const {
  switch (e) {
    case Edge::left: return left;
    case Edge::right: return right;
    case Edge::bottom: return bottom;
    default: return top;
  }
}

PhiBC BoundarySpec::phi_edge(Edge e) const {
  switch (e) {
    case Edge::left: return phi_left;
    case Edge::right: return phi_right;
    case Edge::bottom: return phi_bottom;
    default: return phi_top;
  }
}

bool BoundarySpec::any_clamped() const {
  return left == EdgeBC::clamped || right == EdgeBC::clamped ||
         bottom == EdgeBC::clamped || top == EdgeBC::clamped;
}

bool BoundarySpec::any_phi_dirichlet() const {
  return phi_left == PhiBC::dirichlet || phi_right == PhiBC::dirichlet ||
         phi_bottom == PhiBC::dirichlet || phi_top == PhiBC::dirichlet;
}

BoundarySpec BoundarySpec::all_free() {
  BoundarySpec bc;
  bc.left = bc.right = bc.bottom = bc.top = EdgeBC::free_edge;
  return bc;
}

BoundarySpec BoundarySpec::all_clamped() { return BoundarySpec{}; }

VecX LinOp::apply(const VecX& x) const {
  VecX y = VecX::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
  return y;
}

VecX LinOp::applyT(const VecX& x) const {
  VecX y = VecX::Zero(cols);
  for (int r = 0; r < rows; ++r)
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) y[col[k]] += val[k] * x[r];
  return y;
}

LinOp LinOpBuilder::build() const {
  LinOp op;
  op.rows = rows_;
  op.cols = cols_;
  op.ptr.resize(rows_ + 1, 0);
  std::size_t nnz = 0;
  for (const auto& row : entries_) nnz += row.size();
  op.col.reserve(nnz);
  op.val.reserve(nnz);
  for (int r = 0; r < rows_; ++r) {
    op.ptr[r] = static_cast<int>(op.col.size());
    for (const auto& [c, w] : entries_[r]) {
      op.col.push_back(c);
      op.val.push_back(w);
    }
  }
  op.ptr[rows_] = static_cast<int>(op.col.size());
  return op;
}

namespace {

// 1D first-derivative stencil along one grid line.
// mode 0: plain (one-sided second order at both ends).
// mode 1: rows at pinned ends are zero (clamped normal slope).
void add_d1_line(LinOpBuilder& b, const Grid2& g, bool xdir, int line, double h, int m,
                 bool zero_lo, bool zero_hi) {
  auto id = [&](int k) { return xdir ? g.idx(k, line) : g.idx(line, k); };
  const double c = 1.0 / (2.0 * h);
  for (int k = 0; k < m; ++k) {
    const int r = id(k);
    if (k == 0) {
      if (zero_lo) continue;
      b.add(r, id(0), -3.0 * c);
      b.add(r, id(1), 4.0 * c);
      b.add(r, id(2), -1.0 * c);
    } else if (k == m - 1) {
      if (zero_hi) continue;
      b.add(r, id(m - 1), 3.0 * c);
      b.add(r, id(m - 2), -4.0 * c);
      b.add(r, id(m - 3), 1.0 * c);
    } else {
      b.add(r, id(k + 1), c);
      b.add(r, id(k - 1), -c);
    }
  }
}

void add_d2_line(LinOpBuilder& b, const Grid2& g, bool xdir, int line, double h, int m,
                 EdgeBC lo, EdgeBC hi) {
  auto id = [&](int k) { return xdir ? g.idx(k, line) : g.idx(line, k); };
  const double c = 1.0 / (h * h);
  for (int k = 0; k < m; ++k) {
    const int r = id(k);
    if (k == 0) {
      if (lo == EdgeBC::clamped) {
        // Mirror ghost f(-1) = f(1) encodes the zero normal slope.
        b.add(r, id(0), -2.0 * c);
        b.add(r, id(1), 2.0 * c);
      } else {
        b.add(r, id(0), c);
        b.add(r, id(1), -2.0 * c);
        b.add(r, id(2), c);
      }
    } else if (k == m - 1) {
      if (hi == EdgeBC::clamped) {
        b.add(r, id(m - 1), -2.0 * c);
        b.add(r, id(m - 2), 2.0 * c);
      } else {
        b.add(r, id(m - 1), c);
        b.add(r, id(m - 2), -2.0 * c);
        b.add(r, id(m - 3), c);
      }
    } else {
      b.add(r, id(k - 1), c);
      b.add(r, id(k), -2.0 * c);
      b.add(r, id(k + 1), c);
    }
  }
}

LinOp build_d1(const Grid2& g, bool xdir, EdgeBC lo, EdgeBC hi, bool bc_aware) {
  g.validate();
  LinOpBuilder b(g.n(), g.n());
  const int lines = xdir ? g.ny : g.nx;
  const int m = xdir ? g.nx : g.ny;
  const double h = xdir ? g.hx() : g.hy();
  const bool zlo = bc_aware && lo == EdgeBC::clamped;
  const bool zhi = bc_aware && hi == EdgeBC::clamped;
  for (int line = 0; line < lines; ++line) add_d1_line(b, g, xdir, line, h, m, zlo, zhi);
  return b.build();
}

LinOp build_d2(const Grid2& g, bool xdir, EdgeBC lo, EdgeBC hi) {
  g.validate();
  LinOpBuilder b(g.n(), g.n());
  const int lines = xdir ? g.ny : g.nx;
  const int m = xdir ? g.nx : g.ny;
  const double h = xdir ? g.hx() : g.hy();
  for (int line = 0; line < lines; ++line) add_d2_line(b, g, xdir, line, h, m, lo, hi);
  return b.build();
}

}  // namespace

LinOp op_dx(const Grid2& g) {
  return build_d1(g, true, EdgeBC::free_edge, EdgeBC::free_edge, false);
}

LinOp op_dy(const Grid2& g) {
  return build_d1(g, false, EdgeBC::free_edge, EdgeBC::free_edge, false);
}

LinOp op_dx_clamped(const Grid2& g, EdgeBC lo, EdgeBC hi) {
  return build_d1(g, true, lo, hi, true);
}

LinOp op_dy_clamped(const Grid2& g, EdgeBC lo, EdgeBC hi) {
  return build_d1(g, false, lo, hi, true);
}

LinOp op_dxx(const Grid2& g, EdgeBC lo, EdgeBC hi) { return build_d2(g, true, lo, hi); }

LinOp op_dyy(const Grid2& g, EdgeBC lo, EdgeBC hi) { return build_d2(g, false, lo, hi); }

VecX trapezoid_weights(const Grid2& g) {
  g.validate();
  VecX w(g.n());
  const double cell = g.hx() * g.hy();
  for (int j = 0; j < g.ny; ++j) {
    const double cy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double cx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      w[g.idx(i, j)] = cell * cx * cy;
    }
  }
  return w;
}

double integrate2(const ScalarField2& f) {
  return trapezoid_weights(f.grid).dot(f.v);
}

VectorField2 grad2(const ScalarField2& f) {
  VectorField2 out(f.grid);
  out.v.head(f.grid.n()) = op_dx(f.grid).apply(f.v);
  out.v.tail(f.grid.n()) = op_dy(f.grid).apply(f.v);
  return out;
}

TensorField2 hessian2(const ScalarField2& f) {
  const Grid2& g = f.grid;
  TensorField2 out;
  out.grid = g;
  out.h11 = op_dxx(g, EdgeBC::free_edge, EdgeBC::free_edge).apply(f.v);
  out.h22 = op_dyy(g, EdgeBC::free_edge, EdgeBC::free_edge).apply(f.v);
  const LinOp dx = op_dx(g);
  const LinOp dy = op_dy(g);
  out.h12 = 0.5 * (dx.apply(dy.apply(f.v)) + dy.apply(dx.apply(f.v)));
  return out;
}

DofMap apply_clamped(const Grid2& g, const BoundarySpec& bc) {
  g.validate();
  DofMap map;
  map.pinned_node.assign(g.n(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const bool pin = (i == 0 && bc.left == EdgeBC::clamped) ||
                       (i == g.nx - 1 && bc.right == EdgeBC::clamped) ||
                       (j == 0 && bc.bottom == EdgeBC::clamped) ||
                       (j == g.ny - 1 && bc.top == EdgeBC::clamped);
      if (pin) map.pinned_node[g.idx(i, j)] = 1;
    }
  int pinned = 0;
  for (auto p : map.pinned_node) pinned += p;
  map.free_per_component = g.n() - pinned;
  return map;
}

}  // namespace nematoplate
