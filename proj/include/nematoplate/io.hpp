#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nematoplate/energy2d.hpp"

namespace nematoplate {

/// Writes `x,y,zeta1,zeta2,zeta3,phi` rows in row-major node order with 17
/// significant digits (doubles round-trip exactly).
void write_fields_csv(const std::string& path, const PlateState& ps,
                      const ScalarField2* phi);

struct FieldsCsv {
  PlateState state;
  ScalarField2 phi;
};

/// Reads fields written by write_fields_csv back onto the given grid.
FieldsCsv read_fields_csv(const std::string& path, const Grid2& g);

/// Flat `key = value` report.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

/// VTK legacy ASCII STRUCTURED_POINTS with one VECTORS (zeta) and one
/// SCALARS (phi) attribute.
void write_vtk(const std::string& path, const PlateState& ps, const ScalarField2* phi);

std::string format_g17(double v);

/// Largest nodal deviation from mirror symmetry about the y midline
/// (x2 -> ly - x2); zeta2 flips sign under the reflection.
double reflection_residual_y(const PlateState& ps);

/// Same about the x midline (x1 -> lx - x1); zeta1 flips sign.
double reflection_residual_x(const PlateState& ps);

}  // namespace nematoplate
