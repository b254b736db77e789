#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nematoplate/dielectric.hpp"
#include "nematoplate/foundation.hpp"
#include "nematoplate/gauss2d.hpp"
#include "nematoplate/microlam.hpp"
#include "nematoplate/qtensor.hpp"
#include "nematoplate/solver.hpp"

namespace py = pybind11;
using namespace nematoplate;

namespace {

Eigen::MatrixXd plane_to_matrix(const Grid2& g, const VecX& plane) {
  Eigen::MatrixXd m(g.ny, g.nx);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m(j, i) = plane[g.idx(i, j)];
  return m;
}

DielectricParams make_dp(double eps_perp, double eps_par) {
  DielectricParams dp;
  dp.eps_perp = eps_perp;
  dp.eps_par = eps_par;
  return dp;
}

}  // namespace

PYBIND11_MODULE(_nematoplate, m) {
  m.doc() = "Effective nematic-elastomer bilayer plate models";

  m.def(
      "make_frank", [](const Vec3& n) { return make_frank(n).mat(); }, py::arg("n"),
      "Order tensor n (x) n - I/3 of a unit director.");
  m.def(
      "make_uniaxial",
      [](double s, const Vec3& n) { return make_uniaxial(s, n).mat(); }, py::arg("s"),
      py::arg("n"));
  m.def(
      "project_qb", [](const Mat3& m_) { return project_QB(m_).mat(); }, py::arg("m"),
      "Nearest tensor of the De Gennes set.");
  m.def(
      "dist2_qb",
      [](const Mat3& m_) {
        const Dist2Result d = dist2_QB(m_);
        return py::make_tuple(d.value, d.gradient);
      },
      py::arg("m"), "Squared distance to the De Gennes set and its gradient.");
  m.def(
      "frank_decomposition",
      [](const Mat3& m_) {
        const FrankDecomposition fd = frank_decomposition(QTensor::from_mat(m_));
        Mat3 dirs;
        for (int k = 0; k < 3; ++k) dirs.col(k) = fd.directions[k];
        return py::make_tuple(Vec3(fd.weights[0], fd.weights[1], fd.weights[2]), dirs);
      },
      py::arg("m"));
  m.def(
      "in_qb", [](const Mat3& m_) { return in_QB(QTensor::from_mat(m_)); }, py::arg("m"));
  m.def(
      "in_qfr", [](const Mat3& m_) { return in_QFr(QTensor::from_mat(m_)); },
      py::arg("m"));

  m.def("k_matrix", &k_matrix, py::arg("zeta_prime"), py::arg("zeta3"));
  m.def(
      "relaxed_density",
      [](const Vec2& zp, double z3, double nu, bool thick) {
        MaterialParams mp;
        mp.nu = nu;
        FoundationSample s;
        s.zeta_prime = zp;
        s.zeta3 = z3;
        s.regime = thick ? LayerRegime::thick : LayerRegime::thin;
        const DensityEval d = relaxed_density(s, mp);
        return py::make_tuple(d.value, d.d_zeta_prime, d.d_zeta3);
      },
      py::arg("zeta_prime"), py::arg("zeta3"), py::arg("nu"), py::arg("thick") = false);

  m.def(
      "d_tensor",
      [](const Mat3& q, double eps_perp, double eps_par) {
        return d_tensor(QTensor::from_mat(q), make_dp(eps_perp, eps_par));
      },
      py::arg("q"), py::arg("eps_perp"), py::arg("eps_par"));
  m.def("schur_b", &schur_B, py::arg("dbar"));
  m.def("c_star", &c_star, py::arg("dbar"), py::arg("g"));

  m.def(
      "solve_gauss",
      [](const Mat2& b, double a0, const Vec2& lin, int nx, int ny) {
        const Grid2 g{nx, ny, 1.0, 1.0};
        GaussProblem gp;
        gp.B = b;
        gp.phi0_const = a0;
        gp.phi0_lin = lin;
        const ScalarField2 phi = solve_gauss(gp, g);
        return plane_to_matrix(g, phi.v);
      },
      py::arg("b"), py::arg("a0"), py::arg("lin"), py::arg("nx"), py::arg("ny"),
      "Full-Dirichlet solve of the reduced Gauss law on the unit square; "
      "returns the potential as an (ny, nx) array.");

  m.def(
      "minimize_actuation",
      [](const Mat3& qbar, double nu, int n, double eps_perp, double eps_par,
         py::object phi_lin) {
        const Grid2 g{n, n, 1.0, 1.0};
        MaterialParams mp;
        mp.nu = nu;
        std::optional<Phi0Spec> phi0;
        if (!phi_lin.is_none()) {
          Phi0Spec spec;
          spec.lin = phi_lin.cast<Vec2>();
          phi0 = spec;
        }
        const ActuationSolution sol = minimize_actuation(
            QTensor::from_mat(qbar), BoundarySpec::all_clamped(), mp,
            make_dp(eps_perp, eps_par), ScalingRegime::thin(Flavor::actuation), g, phi0);
        py::dict out;
        out["zeta1"] = plane_to_matrix(g, sol.state.zeta_prime.v.head(g.n()));
        out["zeta2"] = plane_to_matrix(g, sol.state.zeta_prime.v.tail(g.n()));
        out["zeta3"] = plane_to_matrix(g, sol.state.zeta3.v);
        if (phi0) out["phi"] = plane_to_matrix(g, sol.phi.v);
        out["energy"] = sol.report.at_opt.total;
        out["foundation"] = sol.report.at_opt.foundation;
        out["iterations"] = sol.report.iterations;
        return out;
      },
      py::arg("qbar"), py::arg("nu") = 0.3, py::arg("n") = 17,
      py::arg("eps_perp") = 1.0, py::arg("eps_par") = 4.0,
      py::arg("phi_lin") = py::none(),
      "Clamped thin-regime actuation minimization on the unit square.");

  m.def(
      "laminate_profile",
      [](const Mat3& qbar, double eta) {
        const LaminateField lf = laminate_profile(QTensor::from_mat(qbar), eta,
                                                  Vec3::UnitX());
        std::vector<std::pair<double, Vec3>> out;
        for (const Stripe& st : lf.stripes) out.emplace_back(st.fraction, st.director);
        return out;
      },
      py::arg("qbar"), py::arg("eta"),
      "Stripe fractions and directors of the Frank laminate realizing qbar.");
}
