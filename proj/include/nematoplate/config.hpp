#pragma once

#include <array>
#include <string>
#include <vector>

#include "nematoplate/energy2d.hpp"
#include "nematoplate/solver.hpp"

namespace nematoplate {

/// Parsed run configuration (line-oriented `key = value` file with bracketed
/// section headers; `#` starts a comment).
struct RunConfig {
  enum class Mode { actuate, minmax, relax, gamma_check, laminate_check, gauss_demo };
  enum class QKind { zero, frank, uniaxial, biaxial };

  Mode mode = Mode::actuate;
  double p = 0.0;  // 0 = thin; thick uses [run] p
  unsigned seed = 0;
  int threads = 1;

  Grid2 grid{65, 65, 1.0, 1.0};
  MaterialParams material{};
  DielectricParams dielectric{};

  QKind qkind = QKind::zero;
  Vec3 director = Vec3::UnitZ();
  double order_s = 1.0;
  std::array<double, 6> q_entries{};  // xx, yy, zz, xy, xz, yz

  BoundarySpec bc;
  bool phi_enabled = false;
  double phi_a0 = 0.0;
  Vec2 phi_lin = Vec2::Zero();

  double f1 = 0.0, f2 = 0.0, f3 = 0.0;  // constant load densities

  QParametrization::Set qset = QParametrization::Set::frank;
  int starts = 8;

  std::vector<double> gamma_eps{0.2, 0.1, 0.05};
  int gamma_nz = 9;
  std::string gamma_check = "all";  // film | work | combined | all

  double lam_eta = 0.01;
  double lam_delta = 0.001;
  Vec3 lam_normal = Vec3::UnitX();

  std::string out_fields, out_report, out_vtk;

  QTensor qtensor() const;
  ScalingRegime regime(Flavor flavor) const;
};

struct ParsedConfig {
  RunConfig config;
  std::vector<std::string> errors;    // "key: message" lines
  std::vector<std::string> warnings;  // "key: warning: message" lines
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

/// Semantic validation on top of parsing; appends to the diagnostic lists.
void validate_config(ParsedConfig& pc);

}  // namespace nematoplate
