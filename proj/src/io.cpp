#include "nematoplate/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nematoplate {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_fields_csv(const std::string& path, const PlateState& ps,
                      const ScalarField2* phi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const Grid2& g = ps.zeta3.grid;
  out << "x,y,zeta1,zeta2,zeta3,phi\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      out << format_g17(g.x(i)) << ',' << format_g17(g.y(j)) << ','
          << format_g17(ps.zeta_prime.u1(k)) << ',' << format_g17(ps.zeta_prime.u2(k))
          << ',' << format_g17(ps.zeta3.v[k]) << ','
          << format_g17(phi ? phi->v[k] : 0.0) << '\n';
    }
}

FieldsCsv read_fields_csv(const std::string& path, const Grid2& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  FieldsCsv out;
  out.state = PlateState::zero(g);
  out.phi = ScalarField2(g);
  std::string line;
  std::getline(in, line);  // header
  int k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (k >= g.n()) throw std::runtime_error(path + ": more rows than grid nodes");
    std::stringstream ss(line);
    std::string tok;
    double vals[6];
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(ss, tok, ','))
        throw std::runtime_error(path + ": short row " + std::to_string(k));
      vals[c] = std::strtod(tok.c_str(), nullptr);
    }
    out.state.zeta_prime.u1(k) = vals[2];
    out.state.zeta_prime.u2(k) = vals[3];
    out.state.zeta3.v[k] = vals[4];
    out.phi.v[k] = vals[5];
    ++k;
  }
  if (k != g.n()) throw std::runtime_error(path + ": row count does not match the grid");
  return out;
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
}

void write_vtk(const std::string& path, const PlateState& ps, const ScalarField2* phi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const Grid2& g = ps.zeta3.grid;
  out << "# vtk DataFile Version 3.0\n";
  out << "nematoplate fields\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n";
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << format_g17(g.hx()) << ' ' << format_g17(g.hy()) << " 1\n";
  out << "POINT_DATA " << g.n() << '\n';
  out << "VECTORS zeta double\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      out << format_g17(ps.zeta_prime.u1(k)) << ' ' << format_g17(ps.zeta_prime.u2(k))
          << ' ' << format_g17(ps.zeta3.v[k]) << '\n';
    }
  out << "SCALARS phi double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out << format_g17(phi ? phi->v[g.idx(i, j)] : 0.0) << '\n';
}

double reflection_residual_y(const PlateState& ps) {
  const Grid2& g = ps.zeta3.grid;
  double res = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const int m = g.idx(i, g.ny - 1 - j);
      res = std::max(res, std::abs(ps.zeta_prime.u1(m) - ps.zeta_prime.u1(k)));
      res = std::max(res, std::abs(ps.zeta_prime.u2(m) + ps.zeta_prime.u2(k)));
      res = std::max(res, std::abs(ps.zeta3.v[m] - ps.zeta3.v[k]));
    }
  return res;
}

double reflection_residual_x(const PlateState& ps) {
  const Grid2& g = ps.zeta3.grid;
  double res = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      const int m = g.idx(g.nx - 1 - i, j);
      res = std::max(res, std::abs(ps.zeta_prime.u1(m) + ps.zeta_prime.u1(k)));
      res = std::max(res, std::abs(ps.zeta_prime.u2(m) - ps.zeta_prime.u2(k)));
      res = std::max(res, std::abs(ps.zeta3.v[m] - ps.zeta3.v[k]));
    }
  return res;
}

}  // namespace nematoplate
