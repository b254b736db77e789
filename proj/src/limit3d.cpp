#include "nematoplate/limit3d.hpp"

#include <cmath>
#include <stdexcept>

namespace nematoplate {

namespace {

constexpr int kDeskNodeLimit = 33 * 33 * 33;

double smoothstep5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep5_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

// Second-order finite difference of one plane along a grid direction.
VecX diff3(const Grid3& g, const VecX& f, int dir) {
  const int stride = dir == 0 ? 1 : (dir == 1 ? g.nx : g.nx * g.ny);
  const int count = dir == 0 ? g.nx : (dir == 1 ? g.ny : g.nz);
  const double h = dir == 0 ? g.hx() : (dir == 1 ? g.hy() : g.hz());
  VecX out(g.n());
  const double c = 1.0 / (2.0 * h);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int id = g.idx(i, j, k);
        const int pos = dir == 0 ? i : (dir == 1 ? j : k);
        if (pos == 0)
          out[id] = c * (-3.0 * f[id] + 4.0 * f[id + stride] - f[id + 2 * stride]);
        else if (pos == count - 1)
          out[id] = c * (3.0 * f[id] - 4.0 * f[id - stride] + f[id - 2 * stride]);
        else
          out[id] = c * (f[id + stride] - f[id - stride]);
      }
  return out;
}

// Trapezoid in-plane, Simpson along z (nz odd).
VecX weights3(const Grid3& g) {
  VecX w(g.n());
  const double cxy = g.hx() * g.hy();
  for (int k = 0; k < g.nz; ++k) {
    double cz;
    if (k == 0 || k == g.nz - 1)
      cz = g.hz() / 3.0;
    else
      cz = (k % 2 == 1 ? 4.0 : 2.0) * g.hz() / 3.0;
    for (int j = 0; j < g.ny; ++j) {
      const double cy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      for (int i = 0; i < g.nx; ++i) {
        const double cx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
        w[g.idx(i, j, k)] = cxy * cx * cy * cz;
      }
    }
  }
  return w;
}

}  // namespace

void Grid3::validate() const {
  if (nx < 4 || ny < 4) throw std::invalid_argument("Grid3: need >= 4 nodes in-plane");
  if (nz < 3 || nz % 2 == 0)
    throw std::invalid_argument("Grid3: nz must be odd and >= 3 (Simpson rule)");
  if (!(lx > 0) || !(ly > 0) || !(z1 > z0))
    throw std::invalid_argument("Grid3: degenerate extents");
}

Energy3Breakdown assemble_j3d(double p, double eps, const Field3& f,
                              const MaterialParams& mp, const DielectricParams& dp,
                              double delta_eps) {
  if (!(eps > 0)) throw std::invalid_argument("assemble_j3d: eps must be positive");
  if (!(p > -1.0 && p <= 0.0)) throw std::invalid_argument("assemble_j3d: p in (-1, 0]");
  const double tc = mp.trace_coeff();
  Energy3Breakdown out;

  if (f.v_film.size() > 0) {
    const Grid3& g = f.film;
    g.validate();
    const int n = g.n();
    const VecX v1 = f.v_film.segment(0, n);
    const VecX v2 = f.v_film.segment(n, n);
    const VecX v3 = f.v_film.segment(2 * n, n);
    const VecX e11 = diff3(g, v1, 0), e22 = diff3(g, v2, 1);
    const VecX d1v2 = diff3(g, v2, 0), d2v1 = diff3(g, v1, 1);
    const VecX d3v1 = diff3(g, v1, 2), d3v2 = diff3(g, v2, 2);
    const VecX d1v3 = diff3(g, v3, 0), d2v3 = diff3(g, v3, 1), e33 = diff3(g, v3, 2);
    const VecX w = weights3(g);
    const double ie = 1.0 / eps, ie2 = 1.0 / (eps * eps);
    double acc = 0;
    for (int id = 0; id < n; ++id) {
      const double e12 = 0.5 * (d2v1[id] + d1v2[id]);
      const double e13 = 0.5 * (d3v1[id] + d1v3[id]);
      const double e23 = 0.5 * (d3v2[id] + d2v3[id]);
      const double ezz = ie2 * e33[id];
      const double tre = e11[id] + e22[id];
      const double dens = e11[id] * e11[id] + e22[id] * e22[id] + 2.0 * e12 * e12 +
                          ezz * ezz + 2.0 * (ie * e13) * (ie * e13) +
                          2.0 * (ie * e23) * (ie * e23) + tc * (tre + ezz) * (tre + ezz);
      acc += w[id] * dens;
    }
    out.film = 0.5 * acc;
  }

  if (f.v_bond.size() > 0) {
    const Grid3& g = f.bond;
    g.validate();
    const int n = g.n();
    const VecX v1 = f.v_bond.segment(0, n);
    const VecX v2 = f.v_bond.segment(n, n);
    const VecX v3 = f.v_bond.segment(2 * n, n);
    const VecX e11 = diff3(g, v1, 0), e22 = diff3(g, v2, 1);
    const VecX d1v2 = diff3(g, v2, 0), d2v1 = diff3(g, v1, 1);
    const VecX d3v1 = diff3(g, v1, 2), d3v2 = diff3(g, v2, 2);
    const VecX d1v3 = diff3(g, v3, 0), d2v3 = diff3(g, v3, 1), e33 = diff3(g, v3, 2);
    const VecX w = weights3(g);
    const double sp1 = std::pow(eps, p + 1.0);
    const double smp = std::pow(eps, -p);
    auto qat = [&](int id, int comp) {
      return f.q_bond.size() > 0 ? f.q_bond[comp * n + id] : 0.0;
    };
    double acc = 0;
    for (int id = 0; id < n; ++id) {
      const double e12 = 0.5 * (d2v1[id] + d1v2[id]);
      const double m11 = eps * e11[id] - qat(id, 0);
      const double m22 = eps * e22[id] - qat(id, 1);
      const double m12 = eps * e12 - qat(id, 3);
      const double m33 = e33[id] - qat(id, 2);
      const double sh1 = 0.5 * (sp1 * d1v3[id] + smp * d3v1[id]) - qat(id, 4);
      const double sh2 = 0.5 * (sp1 * d2v3[id] + smp * d3v2[id]) - qat(id, 5);
      const double tr = eps * (e11[id] + e22[id]) + e33[id];
      const double dens = m11 * m11 + m22 * m22 + 2.0 * m12 * m12 + m33 * m33 +
                          2.0 * (sh1 * sh1 + sh2 * sh2) + tc * tr * tr;
      acc += w[id] * dens;
    }
    out.bonding = 0.5 * acc;
  }

  if (f.q_bond.size() > 0 && delta_eps != 0.0) {
    const Grid3& g = f.bond;
    const int n = g.n();
    const double fac_plane = std::pow(eps, 2.0 * p + 2.0);
    const VecX w = weights3(g);
    VecX plane_sq = VecX::Zero(n), trans_sq = VecX::Zero(n);
    for (int comp = 0; comp < 6; ++comp) {
      const double mult = comp < 3 ? 1.0 : 2.0;  // off-diagonal pairs count twice
      const VecX qc = f.q_bond.segment(comp * n, n);
      const VecX qx = diff3(g, qc, 0), qy = diff3(g, qc, 1), qz = diff3(g, qc, 2);
      for (int id = 0; id < n; ++id) {
        plane_sq[id] += mult * (qx[id] * qx[id] + qy[id] * qy[id]);
        trans_sq[id] += mult * qz[id] * qz[id];
      }
    }
    double acc = 0;
    for (int id = 0; id < n; ++id)
      acc += w[id] * (fac_plane * plane_sq[id] + trans_sq[id]);
    out.frank = 0.5 * delta_eps * delta_eps * acc;
  }

  if (f.phi_bond.size() > 0) {
    const Grid3& g = f.bond;
    const int n = g.n();
    const double s = std::pow(eps, -(p + 1.0));
    const VecX px = diff3(g, f.phi_bond, 0);
    const VecX py = diff3(g, f.phi_bond, 1);
    const VecX pz = diff3(g, f.phi_bond, 2);
    const VecX w = weights3(g);
    double acc = 0;
    for (int id = 0; id < n; ++id) {
      QTensor q;
      if (f.q_bond.size() > 0)
        q = QTensor{f.q_bond[id], f.q_bond[n + id], f.q_bond[2 * n + id],
                    f.q_bond[3 * n + id], f.q_bond[4 * n + id], f.q_bond[5 * n + id]};
      const Mat3 d = d_tensor(q, dp);
      const Vec3 gp(px[id], py[id], s * pz[id]);
      acc += w[id] * gp.dot(d * gp);
    }
    out.electrostatic = 0.5 * acc;
  }

  out.total = out.film + out.bonding + out.frank - out.electrostatic;
  return out;
}

Field3 recovery_film(const PlateState& zeta, double eps, const MaterialParams& mp,
                     int nz_film) {
  if (zeta.rep != Representation::interface)
    throw std::invalid_argument("recovery_film: interface representation required");
  const Grid2& g2 = zeta.zeta3.grid;
  const double c = mp.plane_trace_coeff();
  const LinOp dx = op_dx(g2), dy = op_dy(g2);
  const int n2 = g2.n();
  const VecX z1 = zeta.zeta_prime.v.head(n2);
  const VecX z2 = zeta.zeta_prime.v.tail(n2);
  const VecX& z3 = zeta.zeta3.v;
  const VecX gx = dx.apply(z3), gy = dy.apply(z3);
  const VecX tre = dx.apply(z1) + dy.apply(z2);
  const VecX trh = dx.apply(gx) + dy.apply(gy);

  Field3 f;
  f.film = Grid3::film(g2, nz_film);
  f.film.validate();
  const int n3 = f.film.n();
  f.v_film = VecX::Zero(3 * n3);
  for (int k = 0; k < nz_film; ++k) {
    const double z = f.film.z(k);
    for (int id2 = 0; id2 < n2; ++id2) {
      const int id3 = k * n2 + id2;
      const double h = -c * (tre[id2] * z - 0.5 * z * z * trh[id2]);
      f.v_film[id3] = z1[id2] - z * gx[id2];
      f.v_film[n3 + id3] = z2[id2] - z * gy[id2];
      f.v_film[2 * n3 + id3] = z3[id2] + eps * eps * h;
    }
  }
  return f;
}

namespace {

// Gradients of the eight trilinear shape functions at the 2x2x2 Gauss points.
struct TriCellBasis {
  double grad[8][8][3];  // [gausspoint][corner][component]
  double weight;

  TriCellBasis(double hx, double hy, double hz) {
    weight = hx * hy * hz / 8.0;
    const double a = 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
    const double b = 0.5 * (1.0 + 1.0 / std::sqrt(3.0));
    const double gp1[2] = {a, b};
    int gi = 0;
    for (int kz = 0; kz < 2; ++kz)
      for (int ky = 0; ky < 2; ++ky)
        for (int kx = 0; kx < 2; ++kx, ++gi) {
          const double u = gp1[kx], v = gp1[ky], w = gp1[kz];
          int ci = 0;
          for (int cz = 0; cz < 2; ++cz)
            for (int cy = 0; cy < 2; ++cy)
              for (int cx = 0; cx < 2; ++cx, ++ci) {
                const double fu = cx ? u : 1.0 - u, du = cx ? 1.0 : -1.0;
                const double fv = cy ? v : 1.0 - v, dv = cy ? 1.0 : -1.0;
                const double fw = cz ? w : 1.0 - w, dw = cz ? 1.0 : -1.0;
                grad[gi][ci][0] = du * fv * fw / hx;
                grad[gi][ci][1] = fu * dv * fw / hy;
                grad[gi][ci][2] = fu * fv * dw / hz;
              }
        }
  }
};

struct TriFem {
  const Grid3& g;
  TriCellBasis basis;
  std::vector<Mat3> dcell;  // scaled dielectric tensor per cell

  TriFem(const Grid3& grid, const std::function<QTensor(const Vec3&)>& qfield,
         const DielectricParams& dp, double szz)
      : g(grid), basis(grid.hx(), grid.hy(), grid.hz()) {
    const Mat3 s = Vec3(1.0, 1.0, szz).asDiagonal();
    dcell.reserve(static_cast<std::size_t>(g.nx - 1) * (g.ny - 1) * (g.nz - 1));
    for (int k = 0; k + 1 < g.nz; ++k)
      for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
          const Vec3 center(g.x(i) + 0.5 * g.hx(), g.y(j) + 0.5 * g.hy(),
                            g.z(k) + 0.5 * g.hz());
          dcell.push_back(s * d_tensor(qfield(center), dp) * s);
        }
  }

  void corners(int i, int j, int k, int c[8]) const {
    c[0] = g.idx(i, j, k);
    c[1] = g.idx(i + 1, j, k);
    c[2] = g.idx(i, j + 1, k);
    c[3] = g.idx(i + 1, j + 1, k);
    c[4] = g.idx(i, j, k + 1);
    c[5] = g.idx(i + 1, j, k + 1);
    c[6] = g.idx(i, j + 1, k + 1);
    c[7] = g.idx(i + 1, j + 1, k + 1);
  }

  template <typename F>
  void for_cells(F&& f) const {
    int cell = 0;
    for (int k = 0; k + 1 < g.nz; ++k)
      for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i, ++cell) f(i, j, k, cell);
  }

  // grad accumulation of the quadratic work functional; linear in phi.
  void apply(const VecX& phi, VecX& out) const {
    out.setZero();
    int c[8];
    for_cells([&](int i, int j, int k, int cell) {
      corners(i, j, k, c);
      const Mat3& d = dcell[cell];
      for (int gp = 0; gp < 8; ++gp) {
        Vec3 v = Vec3::Zero();
        for (int ci = 0; ci < 8; ++ci) {
          v.x() += phi[c[ci]] * basis.grad[gp][ci][0];
          v.y() += phi[c[ci]] * basis.grad[gp][ci][1];
          v.z() += phi[c[ci]] * basis.grad[gp][ci][2];
        }
        const Vec3 dv = basis.weight * (d * v);
        for (int ci = 0; ci < 8; ++ci)
          out[c[ci]] += basis.grad[gp][ci][0] * dv.x() +
                        basis.grad[gp][ci][1] * dv.y() + basis.grad[gp][ci][2] * dv.z();
      }
    });
  }

  double work(const VecX& phi) const {
    double acc = 0;
    int c[8];
    for_cells([&](int i, int j, int k, int cell) {
      corners(i, j, k, c);
      const Mat3& d = dcell[cell];
      for (int gp = 0; gp < 8; ++gp) {
        Vec3 v = Vec3::Zero();
        for (int ci = 0; ci < 8; ++ci) {
          v.x() += phi[c[ci]] * basis.grad[gp][ci][0];
          v.y() += phi[c[ci]] * basis.grad[gp][ci][1];
          v.z() += phi[c[ci]] * basis.grad[gp][ci][2];
        }
        acc += basis.weight * v.dot(d * v);
      }
    });
    return 0.5 * acc;
  }

  VecX diagonal() const {
    VecX diag = VecX::Zero(g.n());
    int c[8];
    for_cells([&](int i, int j, int k, int cell) {
      corners(i, j, k, c);
      const Mat3& d = dcell[cell];
      for (int gp = 0; gp < 8; ++gp)
        for (int ci = 0; ci < 8; ++ci) {
          const Vec3 gr(basis.grad[gp][ci][0], basis.grad[gp][ci][1],
                        basis.grad[gp][ci][2]);
          diag[c[ci]] += basis.weight * gr.dot(d * gr);
        }
    });
    return diag;
  }
};

}  // namespace

Gauss3Result gauss3d_desk(double p, double eps, const Grid3& bond,
                          const std::function<QTensor(const Vec3&)>& qfield,
                          const DielectricParams& dp, double phi0_const,
                          const Vec2& phi0_lin, const BoundarySpec& bc) {
  bond.validate();
  if (bond.n() > kDeskNodeLimit)
    throw std::invalid_argument("gauss3d_desk: grid exceeds the desk-scale limit");
  if (!bc.any_phi_dirichlet())
    throw std::invalid_argument("gauss3d_desk: needs a Dirichlet part of positive length");

  const double szz = std::pow(eps, -(p + 1.0));
  TriFem fem(bond, qfield, dp, szz);

  std::vector<std::uint8_t> pin(bond.n(), 0);
  VecX phi = VecX::Zero(bond.n());
  for (int k = 0; k < bond.nz; ++k)
    for (int j = 0; j < bond.ny; ++j)
      for (int i = 0; i < bond.nx; ++i) {
        const bool d = (i == 0 && bc.phi_left == PhiBC::dirichlet) ||
                       (i == bond.nx - 1 && bc.phi_right == PhiBC::dirichlet) ||
                       (j == 0 && bc.phi_bottom == PhiBC::dirichlet) ||
                       (j == bond.ny - 1 && bc.phi_top == PhiBC::dirichlet);
        if (d) {
          const int id = bond.idx(i, j, k);
          pin[id] = 1;
          phi[id] = phi0_const + phi0_lin.x() * bond.x(i) + phi0_lin.y() * bond.y(j);
        }
      }

  auto mask = [&](VecX& x) {
    for (int id = 0; id < bond.n(); ++id)
      if (pin[id]) x[id] = 0.0;
  };

  VecX tmp(bond.n());
  fem.apply(phi, tmp);
  VecX r = -tmp;
  mask(r);
  const double r0 = std::max(r.norm(), 1e-300);
  VecX diag = fem.diagonal();
  for (int id = 0; id < bond.n(); ++id)
    if (diag[id] <= 0) diag[id] = 1.0;
  VecX z = r.cwiseQuotient(diag);
  mask(z);
  VecX pdir = z;
  double rz = r.dot(z);
  GaussStats st;
  const int maxit = 10 * bond.n();
  for (int it = 0; it < maxit && r.norm() > 1e-12 * r0; ++it) {
    fem.apply(pdir, tmp);
    mask(tmp);
    const double pap = pdir.dot(tmp);
    if (pap <= 0) break;
    const double alpha = rz / pap;
    phi += alpha * pdir;
    r -= alpha * tmp;
    st.iterations = it + 1;
    z = r.cwiseQuotient(diag);
    mask(z);
    const double rz_new = r.dot(z);
    pdir = z + (rz_new / rz) * pdir;
    rz = rz_new;
  }
  st.relative_residual = r.norm() / r0;

  Gauss3Result out;
  out.work = fem.work(phi);
  out.phi = std::move(phi);
  out.stats = st;
  return out;
}

VecX transverse_average_scaled_dz(const Grid3& g, const VecX& phi, double p, double eps) {
  const double s = std::pow(eps, -(p + 1.0));
  const VecX dz = diff3(g, phi, 2);
  VecX avg = VecX::Zero(g.nx * g.ny);
  // Simpson average along z.
  const double norm = 1.0 / (g.z1 - g.z0);
  for (int k = 0; k < g.nz; ++k) {
    double cz = (k == 0 || k == g.nz - 1) ? g.hz() / 3.0
                                          : (k % 2 == 1 ? 4.0 : 2.0) * g.hz() / 3.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        avg[j * g.nx + i] += norm * cz * s * dz[g.idx(i, j, k)];
  }
  return avg;
}

namespace {

// Exact period statistics of the fast laminate profiles entering the
// homogenized recovery energy: step and mollified tensors and the zigzag
// displacement amplitude G with G' = chi_1 - fraction, mean removed.
struct FastStats {
  double varQ = 0, M2 = 0, M3 = 0, g2 = 0;
  QTensor M1, gQ, gQm;
  double c2 = 0;  // avg |d Qmol / ds|^2 per unit length
};

FastStats laminate_stats(const LaminateField& lf, const MollifiedLaminate& ml,
                         double fraction) {
  FastStats st;
  const int samples = 8192;
  const double eta = lf.eta;
  const double w1 = fraction * eta;
  QTensor qbar = lf.average();

  // Mean of the raw G profile, removed below.
  double gmean = 0;
  for (int k = 0; k < samples; ++k) {
    const double s = (k + 0.5) * eta / samples;
    gmean += std::min(s, w1) - fraction * s;
  }
  gmean /= samples;

  for (int k = 0; k < samples; ++k) {
    const double s = (k + 0.5) * eta / samples;
    const QTensor qs = lf.at(s);
    const QTensor qm = ml.at(s);
    const QTensor dq = qs - qbar;
    const QTensor dm = qs - qm;
    const double g = std::min(s, w1) - fraction * s - gmean;
    st.varQ += dq.norm2();
    st.M2 += dm.norm2();
    st.M3 += dq.dot(dm);
    st.g2 += g * g;
    st.M1 = st.M1 + dm;
    st.gQ = st.gQ + dq * g;
    st.gQm = st.gQm + dm * g;
  }
  const double inv = 1.0 / samples;
  st.varQ *= inv;
  st.M2 *= inv;
  st.M3 *= inv;
  st.g2 *= inv;
  st.M1 = st.M1 * inv;
  st.gQ = st.gQ * inv;
  st.gQm = st.gQm * inv;
  st.c2 = ml.curvature_integral();
  return st;
}

double frob3(const Mat3& m) { return m.squaredNorm(); }

}  // namespace

std::vector<GammaTrendRow> upper_bound_trend(const PlateState& zeta, const Vec3& n1,
                                             const Vec3& n2, double fraction,
                                             std::span<const double> eps_list,
                                             const MaterialParams& mp, double p,
                                             const UpperBoundKnobs& knobs) {
  if (zeta.rep != Representation::interface)
    throw std::invalid_argument("upper_bound_trend: interface representation required");
  const Grid2& g2 = zeta.zeta3.grid;
  const double tc = mp.trace_coeff();
  const bool thin = p == 0.0;

  const TwoVariantDisplacement tv = two_variant_displacement(n1, n2, fraction, 1.0);
  if (tv.degenerate)
    throw std::invalid_argument("upper_bound_trend: needs two distinct variants");
  const QTensor q1 = make_frank(tv.n);
  const QTensor q2t = make_frank(tv.m);
  const QTensor qbar = q1 * fraction + q2t * (1.0 - fraction);
  const Vec2 qe3(qbar.xz, qbar.yz);

  // Slow fields on the plate grid.
  const PlateOps ops = PlateOps::make(g2, BoundarySpec::all_free());
  const int n = g2.n();
  const VecX z1 = zeta.zeta_prime.v.head(n);
  const VecX z2 = zeta.zeta_prime.v.tail(n);
  const VecX& z3 = zeta.zeta3.v;
  const VecX e11 = ops.dx.apply(z1), e22 = ops.dy.apply(z2);
  const VecX e12v = 0.5 * (ops.dy.apply(z1) + ops.dx.apply(z2));
  const VecX gx = ops.dx.apply(z3), gy = ops.dy.apply(z3);
  const VecX wq = trapezoid_weights(g2);

  // 2D limit value for the pinned laminate target.
  const MaterialParams mp_checked = mp;
  EnergyResult film2d = film_energy(zeta, mp_checked, ops);
  double found2d = 0;
  for (int id = 0; id < n; ++id) {
    const double qplane2 =
        qbar.xx * qbar.xx + qbar.yy * qbar.yy + 2.0 * qbar.xy * qbar.xy;
    Vec2 shear = -qe3;
    if (thin) shear += 0.5 * Vec2(z1[id], z2[id]);
    const double vert = z3[id] - qbar.zz;
    found2d += 0.5 * wq[id] *
               (qplane2 + 2.0 * shear.squaredNorm() + vert * vert + tc * z3[id] * z3[id]);
  }
  const double j2d = film2d.value + found2d;

  // Piecewise Gauss-Legendre nodes in x3 so that the cutoff ramps (quintic
  // polynomials of width rho) are integrated exactly.
  const double rho = knobs.rho;
  const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                          0.8611363115940526};
  const double gl_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                          0.3478548451374538};
  struct ZQuad {
    double z, w;
  };
  std::vector<ZQuad> zq;
  const double breaks[4] = {-1.0, -1.0 + rho, -rho, 0.0};
  for (int seg = 0; seg < 3; ++seg) {
    const double a = breaks[seg], b = breaks[seg + 1];
    for (int q = 0; q < 4; ++q)
      zq.push_back({0.5 * (a + b) + 0.5 * (b - a) * gl_x[q], 0.5 * (b - a) * gl_w[q]});
  }

  std::vector<GammaTrendRow> rows;
  for (double eps : eps_list) {
    const double eta = std::pow(eps, knobs.eta_pow);
    const double delta = std::pow(eps, knobs.delta_pow);
    const double delta_eps = std::pow(eps, knobs.delta_eps_pow);
    const double smp = std::pow(eps, -p);
    const double sp1 = std::pow(eps, p + 1.0);

    LaminateField lf;
    lf.eta = eta;
    lf.normal = tv.interface_normal;
    lf.stripes = {{fraction, q1, tv.n}, {1.0 - fraction, q2t, tv.m}};
    const MollifiedLaminate ml = mollify_laminate(lf, delta);
    const FastStats st = laminate_stats(lf, ml, fraction);
    const Mat3 m1m = st.M1.mat(), gqm = st.gQ.mat(), gqmm = st.gQm.mat();

    // Film recovery energy, assembled on an actual 3D grid.
    const Field3 film = recovery_film(zeta, eps, mp, knobs.nz_film);
    const Energy3Breakdown film_bd =
        assemble_j3d(p, eps, film, mp, DielectricParams{}, 0.0);

    // Bonding energy: slow fields integrated on the grid, fast laminate
    // statistics folded in exactly; see FastStats.
    double jb = 0;
    for (int id = 0; id < n; ++id) {
      const double xw = wq[id];
      const int i = id % g2.nx, j = id / g2.nx;
      const double px = g2.x(i), py = g2.y(j);
      const double dmin =
          std::min(std::min(px, g2.lx - px), std::min(py, g2.ly - py));
      const double txy = smoothstep5(dmin / rho);
      Vec2 grad_txy = Vec2::Zero();
      if (dmin < rho) {
        const double d5 = smoothstep5_deriv(dmin / rho) / rho;
        if (dmin == px)
          grad_txy = Vec2(d5, 0);
        else if (dmin == g2.lx - px)
          grad_txy = Vec2(-d5, 0);
        else if (dmin == py)
          grad_txy = Vec2(0, d5);
        else
          grad_txy = Vec2(0, -d5);
      }

      Mat3 a_c = Mat3::Zero();
      a_c(0, 0) = -qbar.xx;
      a_c(1, 1) = -qbar.yy;
      a_c(0, 1) = a_c(1, 0) = -qbar.xy;
      a_c(2, 2) = z3[id] - qbar.zz;
      const double sh1 = 0.5 * smp * z1[id] - qbar.xz;
      const double sh2 = 0.5 * smp * z2[id] - qbar.yz;
      a_c(0, 2) = a_c(2, 0) = sh1;
      a_c(1, 2) = a_c(2, 1) = sh2;
      Mat3 a_l = Mat3::Zero();
      a_l(0, 0) = eps * e11[id];
      a_l(1, 1) = eps * e22[id];
      a_l(0, 1) = a_l(1, 0) = eps * e12v[id];
      a_l(0, 2) = a_l(2, 0) = 0.5 * sp1 * gx[id];
      a_l(1, 2) = a_l(2, 1) = 0.5 * sp1 * gy[id];
      const double tre = e11[id] + e22[id];

      double acc = 0;
      for (const ZQuad& q : zq) {
        const double zp1 = q.z + 1.0;
        double tz = 1.0, dtz = 0.0;
        if (zp1 < rho) {
          tz = smoothstep5(zp1 / rho);
          dtz = smoothstep5_deriv(zp1 / rho) / rho;
        } else if (-q.z < rho) {
          tz = smoothstep5(-q.z / rho);
          dtz = -smoothstep5_deriv(-q.z / rho) / rho;
        }
        const double theta = txy * tz;
        const Vec2 gt = grad_txy * tz;
        const double dt3 = txy * dtz;

        const Mat3 x = a_c + zp1 * a_l;
        const double trx = eps * zp1 * tre + z3[id];

        Mat3 s_theta = Mat3::Zero();
        s_theta(0, 0) = eps * gt.x() * tv.a.x();
        s_theta(1, 1) = eps * gt.y() * tv.a.y();
        s_theta(0, 1) = s_theta(1, 0) = 0.5 * eps * (gt.x() * tv.a.y() + gt.y() * tv.a.x());
        s_theta(0, 2) = s_theta(2, 0) =
            0.5 * (eps * gt.x() * tv.a.z() + smp * dt3 * tv.a.x());
        s_theta(1, 2) = s_theta(2, 1) =
            0.5 * (eps * gt.y() * tv.a.z() + smp * dt3 * tv.a.y());
        s_theta(2, 2) = smp * tv.a.z() * dt3;
        const double tr_s = s_theta.trace();

        const double one_m = 1.0 - theta;
        double dens = frob3(x) + 2.0 * (x.cwiseProduct(m1m)).sum() + one_m * one_m * st.varQ +
                      st.M2 - 2.0 * one_m * st.M3 - 2.0 * one_m * (gqm.cwiseProduct(s_theta)).sum() +
                      2.0 * (gqmm.cwiseProduct(s_theta)).sum() + st.g2 * frob3(s_theta);
        dens += tc * (trx * trx + st.g2 * tr_s * tr_s);
        acc += q.w * dens;
      }
      jb += 0.5 * xw * acc;
    }
    // Frank curvature of the mollified laminate, uniform over the layer.
    jb += 0.5 * delta_eps * delta_eps * std::pow(eps, 2.0 * p) * st.c2 * g2.lx * g2.ly;

    GammaTrendRow row;
    row.eps = eps;
    row.j3d = film_bd.film + jb;
    row.j2d = j2d;
    row.gap = row.j3d - row.j2d;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nematoplate
