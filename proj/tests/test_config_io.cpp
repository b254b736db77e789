#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nematoplate/config.hpp"
#include "nematoplate/io.hpp"
#include "test_support.hpp"

using namespace nematoplate;

TEST_SUITE_BEGIN("config_io");

TEST_CASE("config parse and defaults") {
  const std::string text = R"(
# actuation demo
[run]
mode = actuate
regime = thin
seed = 3

[grid]
nx = 17
ny = 17

[material]
nu = 0.3

[q]
kind = frank
director = 0.70710678118654752, 0, 0.70710678118654752
)";
  ParsedConfig pc = parse_config_text(text);
  validate_config(pc);
  CHECK(pc.errors.empty());
  CHECK(pc.config.mode == RunConfig::Mode::actuate);
  CHECK(pc.config.grid.nx == 17);
  CHECK(pc.config.material.nu == doctest::Approx(0.3));
  CHECK(pc.config.qkind == RunConfig::QKind::frank);
  const QTensor q = pc.config.qtensor();
  CHECK(q.xz == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("config diagnostics") {
  ParsedConfig missing = parse_config_text("[q]\nkind = frank\ndirector = 1, 1, 0\n");
  validate_config(missing);
  bool found = false;
  for (const auto& e : missing.errors)
    if (e.find("q.director") != std::string::npos) found = true;
  CHECK(found);

  ParsedConfig nubad = parse_config_text("[material]\nnu = 0.6\n");
  validate_config(nubad);
  found = false;
  for (const auto& e : nubad.errors)
    if (e.find("material.nu") != std::string::npos) found = true;
  CHECK(found);

  ParsedConfig unknown = parse_config_text("[grid]\nxn = 9\n");
  found = false;
  for (const auto& e : unknown.errors)
    if (e.find("grid.xn") != std::string::npos && e.find("unknown") != std::string::npos)
      found = true;
  CHECK(found);

  // Thick regime with a sheared tensor: regime-gate warning.
  ParsedConfig shear = parse_config_text(
      "[run]\nmode = actuate\nregime = thick\n[q]\nkind = frank\n"
      "director = 0.70710678118654752, 0, 0.70710678118654752\n");
  validate_config(shear);
  CHECK(shear.errors.empty());
  found = false;
  for (const auto& w : shear.warnings)
    if (w.find("warning") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("csv round trip is exact") {
  const Grid2 g{8, 6, 1.0, 2.0};
  auto gen = testsupport::rng(157);
  std::normal_distribution<double> nd(0.0, 1.0);
  PlateState ps = PlateState::zero(g);
  ScalarField2 phi(g);
  for (int k = 0; k < g.n(); ++k) {
    ps.zeta_prime.u1(k) = nd(gen);
    ps.zeta_prime.u2(k) = nd(gen);
    ps.zeta3.v[k] = nd(gen);
    phi.v[k] = nd(gen);
  }
  const std::string path = "roundtrip_test.csv";
  write_fields_csv(path, ps, &phi);
  const FieldsCsv back = read_fields_csv(path, g);
  CHECK((back.state.zeta_prime.v - ps.zeta_prime.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.state.zeta3.v - ps.zeta3.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.phi.v - phi.v).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("vtk header layout") {
  const Grid2 g{5, 4, 1.0, 1.0};
  const PlateState ps = PlateState::zero(g);
  const std::string path = "vtk_test.vtk";
  write_vtk(path, ps, nullptr);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET STRUCTURED_POINTS");
  std::getline(in, line);
  CHECK(line == "DIMENSIONS 5 4 1");
  std::remove(path.c_str());
}

TEST_SUITE_END();
