#include "nematoplate/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace nematoplate {

QTensor RunConfig::qtensor() const {
  switch (qkind) {
    case QKind::zero: return QTensor{};
    case QKind::frank: return make_frank(director.normalized());
    case QKind::uniaxial: return make_uniaxial(order_s, director.normalized());
    default: {
      QTensor q{q_entries[0], q_entries[1], q_entries[2],
                q_entries[3], q_entries[4], q_entries[5]};
      return project_QB(q.mat());
    }
  }
}

ScalingRegime RunConfig::regime(Flavor flavor) const {
  ScalingRegime r;
  r.p = p;
  r.flavor = flavor;
  return r;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct KeyTable {
  std::map<std::string, std::string> values;  // "section.key" -> raw value
  std::map<std::string, bool> used;
  std::vector<std::string>* errors = nullptr;

  bool has(const std::string& k) { return values.count(k) > 0; }

  std::string raw(const std::string& k, const std::string& fallback) {
    auto it = values.find(k);
    if (it == values.end()) return fallback;
    used[k] = true;
    return it->second;
  }

  double number(const std::string& k, double fallback) {
    auto it = values.find(k);
    if (it == values.end()) return fallback;
    used[k] = true;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || trim(end).size() > 0) {
      errors->push_back(k + ": not a number: '" + it->second + "'");
      return fallback;
    }
    return v;
  }

  std::vector<double> numbers(const std::string& k, std::size_t expect) {
    std::vector<double> out;
    auto it = values.find(k);
    if (it == values.end()) return out;
    used[k] = true;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || trim(end).size() > 0) {
        errors->push_back(k + ": not a number list: '" + it->second + "'");
        return {};
      }
      out.push_back(v);
    }
    if (expect > 0 && out.size() != expect)
      errors->push_back(k + ": expected " + std::to_string(expect) + " values");
    return out;
  }

  bool flag(const std::string& k, bool fallback) {
    const std::string v = raw(k, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    errors->push_back(k + ": expected a boolean, got '" + v + "'");
    return fallback;
  }
};

EdgeBC parse_edge(KeyTable& kt, const std::string& key) {
  const std::string v = kt.raw(key, "clamped");
  if (v == "clamped") return EdgeBC::clamped;
  if (v == "free") return EdgeBC::free_edge;
  kt.errors->push_back(key + ": expected clamped|free, got '" + v + "'");
  return EdgeBC::clamped;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig pc;
  KeyTable kt;
  kt.errors = &pc.errors;

  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        pc.errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      pc.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty() || key.empty()) {
      pc.errors.push_back("line " + std::to_string(lineno) + ": key outside a section");
      continue;
    }
    kt.values[section + "." + key] = value;
  }

  RunConfig& c = pc.config;

  const std::string mode = kt.raw("run.mode", "actuate");
  if (mode == "actuate")
    c.mode = RunConfig::Mode::actuate;
  else if (mode == "minmax")
    c.mode = RunConfig::Mode::minmax;
  else if (mode == "relax")
    c.mode = RunConfig::Mode::relax;
  else if (mode == "gamma-check")
    c.mode = RunConfig::Mode::gamma_check;
  else if (mode == "laminate-check")
    c.mode = RunConfig::Mode::laminate_check;
  else if (mode == "gauss-demo")
    c.mode = RunConfig::Mode::gauss_demo;
  else
    pc.errors.push_back("run.mode: unknown mode '" + mode + "'");

  const std::string regime = kt.raw("run.regime", "thin");
  const double p_value = kt.number("run.p", -0.5);
  if (regime == "thin")
    c.p = 0.0;
  else if (regime == "thick")
    c.p = p_value;
  else
    pc.errors.push_back("run.regime: expected thin|thick, got '" + regime + "'");
  c.seed = static_cast<unsigned>(kt.number("run.seed", 0));
  c.threads = static_cast<int>(kt.number("run.threads", 1));

  c.grid.nx = static_cast<int>(kt.number("grid.nx", 65));
  c.grid.ny = static_cast<int>(kt.number("grid.ny", 65));
  c.grid.lx = kt.number("grid.lx", 1.0);
  c.grid.ly = kt.number("grid.ly", 1.0);

  c.material.nu = kt.number("material.nu", 0.3);
  c.dielectric.eps_perp = kt.number("dielectric.eps_perp", 1.0);
  c.dielectric.eps_par = kt.number("dielectric.eps_par", 4.0);

  const std::string qkind = kt.raw("q.kind", "zero");
  if (qkind == "zero")
    c.qkind = RunConfig::QKind::zero;
  else if (qkind == "frank")
    c.qkind = RunConfig::QKind::frank;
  else if (qkind == "uniaxial")
    c.qkind = RunConfig::QKind::uniaxial;
  else if (qkind == "biaxial")
    c.qkind = RunConfig::QKind::biaxial;
  else
    pc.errors.push_back("q.kind: unknown kind '" + qkind + "'");
  if (auto v = kt.numbers("q.director", 3); v.size() == 3)
    c.director = Vec3(v[0], v[1], v[2]);
  c.order_s = kt.number("q.s", 1.0);
  if (auto v = kt.numbers("q.entries", 6); v.size() == 6)
    for (int i = 0; i < 6; ++i) c.q_entries[i] = v[i];

  c.bc.left = parse_edge(kt, "bc.left");
  c.bc.right = parse_edge(kt, "bc.right");
  c.bc.bottom = parse_edge(kt, "bc.bottom");
  c.bc.top = parse_edge(kt, "bc.top");

  c.phi_enabled = kt.flag("phi.enabled", false);
  c.phi_a0 = kt.number("phi.a0", 0.0);
  c.phi_lin = Vec2(kt.number("phi.ax", 0.0), kt.number("phi.ay", 0.0));
  {
    const std::string edges = kt.raw("phi.dirichlet", "left,right,bottom,top");
    c.bc.phi_left = c.bc.phi_right = c.bc.phi_bottom = c.bc.phi_top = PhiBC::natural;
    std::stringstream es(edges);
    std::string tok;
    while (std::getline(es, tok, ',')) {
      tok = trim(tok);
      if (tok == "left")
        c.bc.phi_left = PhiBC::dirichlet;
      else if (tok == "right")
        c.bc.phi_right = PhiBC::dirichlet;
      else if (tok == "bottom")
        c.bc.phi_bottom = PhiBC::dirichlet;
      else if (tok == "top")
        c.bc.phi_top = PhiBC::dirichlet;
      else if (!tok.empty())
        pc.errors.push_back("phi.dirichlet: unknown edge '" + tok + "'");
    }
  }

  c.f1 = kt.number("loads.f1", 0.0);
  c.f2 = kt.number("loads.f2", 0.0);
  c.f3 = kt.number("loads.f3", 0.0);

  const std::string qset = kt.raw("minmax.set", "frank");
  if (qset == "frank")
    c.qset = QParametrization::Set::frank;
  else if (qset == "uniaxial")
    c.qset = QParametrization::Set::uniaxial;
  else if (qset == "biaxial")
    c.qset = QParametrization::Set::biaxial;
  else
    pc.errors.push_back("minmax.set: unknown set '" + qset + "'");
  c.starts = static_cast<int>(kt.number("minmax.starts", 8));

  if (auto v = kt.numbers("gamma.eps", 0); !v.empty()) c.gamma_eps = v;
  c.gamma_nz = static_cast<int>(kt.number("gamma.nz", 9));
  c.gamma_check = kt.raw("gamma.check", "all");

  c.lam_eta = kt.number("laminate.eta", 0.01);
  c.lam_delta = kt.number("laminate.delta", 0.001);
  if (auto v = kt.numbers("laminate.normal", 3); v.size() == 3)
    c.lam_normal = Vec3(v[0], v[1], v[2]);

  c.out_fields = kt.raw("output.fields", "");
  c.out_report = kt.raw("output.report", "");
  c.out_vtk = kt.raw("output.vtk", "");

  for (const auto& [key, value] : kt.values)
    if (!kt.used.count(key)) pc.errors.push_back(key + ": unknown key");
  return pc;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParsedConfig pc;
    pc.errors.push_back(path + ": cannot open config file");
    return pc;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(ParsedConfig& pc) {
  RunConfig& c = pc.config;
  if (c.grid.nx < 4 || c.grid.ny < 4)
    pc.errors.push_back("grid.nx: need at least 4 nodes per direction");
  if (!(c.grid.lx > 0 && c.grid.ly > 0))
    pc.errors.push_back("grid.lx: extents must be positive");
  if (!(c.material.nu > -1.0 && c.material.nu < 0.5))
    pc.errors.push_back("material.nu: outside (-1, 1/2)");
  if (!(c.dielectric.eps_perp > 0 && c.dielectric.eps_par > 0))
    pc.errors.push_back("dielectric.eps_perp: permittivities must be positive");
  if (!(c.p > -1.0 && c.p <= 0.0)) pc.errors.push_back("run.p: must lie in (-1, 0]");
  if (c.threads < 1) pc.errors.push_back("run.threads: must be >= 1");

  const bool needs_q =
      c.mode == RunConfig::Mode::actuate || c.mode == RunConfig::Mode::gauss_demo;
  if (needs_q && c.qkind == RunConfig::QKind::frank &&
      std::abs(c.director.norm() - 1.0) > 1e-8)
    pc.errors.push_back("q.director: frank director must be a unit vector");
  if (c.qkind == RunConfig::QKind::uniaxial && (c.order_s < -0.5 || c.order_s > 1.0))
    pc.errors.push_back("q.s: order parameter outside [-1/2, 1]");

  if (c.phi_enabled && !c.bc.any_phi_dirichlet())
    pc.errors.push_back("phi.dirichlet: needs at least one Dirichlet edge");

  const bool solver_mode = c.mode == RunConfig::Mode::actuate ||
                           c.mode == RunConfig::Mode::minmax ||
                           c.mode == RunConfig::Mode::relax;
  if (solver_mode && !(c.material.nu >= 0.0 && c.material.nu < 0.5))
    pc.errors.push_back("material.nu: solvers require nu in [0, 1/2)");
  if (solver_mode && !c.bc.any_clamped() && !c.phi_enabled &&
      c.qkind == RunConfig::QKind::zero)
    pc.errors.push_back("bc.left: all-free plate with zero data is semidefinite");

  if (c.mode == RunConfig::Mode::gamma_check) {
    if (c.gamma_eps.size() < 2)
      pc.errors.push_back("gamma.eps: need at least two epsilon values");
    for (double e : c.gamma_eps)
      if (!(e > 0 && e < 1)) pc.errors.push_back("gamma.eps: values must lie in (0, 1)");
    if (c.gamma_nz < 3 || c.gamma_nz % 2 == 0)
      pc.errors.push_back("gamma.nz: must be odd and >= 3");
    if (c.gamma_check != "film" && c.gamma_check != "work" &&
        c.gamma_check != "combined" && c.gamma_check != "all")
      pc.errors.push_back("gamma.check: expected film|work|combined|all");
  }
  if (c.mode == RunConfig::Mode::laminate_check) {
    if (!(c.lam_eta > 0)) pc.errors.push_back("laminate.eta: must be positive");
    if (!(c.lam_delta < c.lam_eta / 4))
      pc.errors.push_back("laminate.delta: must be below eta/4");
  }

  // Regime gate: with a thick foundation the in-plane shear of Q does not act.
  if (c.p < 0.0 &&
      (c.qkind == RunConfig::QKind::frank || c.qkind == RunConfig::QKind::uniaxial ||
       c.qkind == RunConfig::QKind::biaxial)) {
    const QTensor q = c.qtensor();
    if (std::abs(q.xz) > 1e-12 || std::abs(q.yz) > 1e-12)
      pc.warnings.push_back(
          "q.kind: warning: thick regime ignores the in-plane shear of Q "
          "(foundation decouples from zeta')");
  }
}

}  // namespace nematoplate
