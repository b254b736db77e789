#include <doctest.h>

#include <cmath>

#include "nematoplate/microlam.hpp"
#include "test_support.hpp"

using namespace nematoplate;
namespace ts = testsupport;

TEST_SUITE_BEGIN("microlam");

TEST_CASE("laminate profile worked targets") {
  // Single variant: one stripe of full width.
  const QTensor fz = make_frank(Vec3::UnitZ());
  const LaminateField single = laminate_profile(fz, 0.1, Vec3::UnitX());
  CHECK(single.stripes.size() == 1);
  CHECK((single.average() - fz).norm2() <= 1e-24);

  // Isotropic target: three equal fractions.
  const LaminateField iso = laminate_profile(QTensor{}, 0.1, Vec3::UnitX());
  CHECK(iso.stripes.size() == 3);
  for (const Stripe& st : iso.stripes)
    CHECK(st.fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::sqrt((iso.average() - QTensor{}).norm2()) <= 1e-12);

  // Two-variant mixture of e1 and e2 franks.
  const QTensor mix =
      make_frank(Vec3::UnitX()) * 0.5 + make_frank(Vec3::UnitY()) * 0.5;
  CHECK(mix.xx == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(mix.zz == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  const LaminateField lf = laminate_profile(mix, 0.02, Vec3::UnitX());
  CHECK(lf.stripes.size() == 2);
  CHECK(lf.stripes[0].fraction == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::sqrt((lf.average() - mix).norm2()) <= 1e-12);

  CHECK_THROWS_AS(laminate_profile(mix, -1.0, Vec3::UnitX()), std::invalid_argument);
}

TEST_CASE("cell averages reconstruct random targets exactly") {
  auto gen = ts::rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    const QTensor qbar = project_QB(ts::random_symmetric(gen, 0.7));
    const LaminateField lf = laminate_profile(qbar, 0.05, ts::random_unit(gen));
    CHECK(std::sqrt((lf.average() - qbar).norm2()) <= 1e-12);
    for (const Stripe& st : lf.stripes) CHECK(in_QFr(st.value, 1e-9));
  }
}

TEST_CASE("windowed averages converge at first order in eta over width") {
  const QTensor iso{};
  const LaminateField lf = laminate_profile(iso, 0.01, Vec3::UnitX());
  const WeakConvergenceReport rep = weak_convergence_check(lf, iso);
  REQUIRE(rep.errors.size() == 3);
  CHECK(rep.errors[0] > rep.errors[1]);
  CHECK(rep.errors[1] > rep.errors[2]);
  CHECK(rep.fitted_rate >= 0.8);
  CHECK(rep.fitted_rate <= 1.2);

  // Single variant: windowed averages are exact.
  const LaminateField single = laminate_profile(make_frank(Vec3::UnitY()), 0.01,
                                                Vec3::UnitX());
  const WeakConvergenceReport rs = weak_convergence_check(single, make_frank(Vec3::UnitY()));
  for (double e : rs.errors) CHECK(e <= 1e-13);
}

TEST_CASE("mollified laminate stays in the Frank set and recovers stripes") {
  const QTensor qbar =
      make_frank(Vec3::UnitX()) * 0.45 + make_frank(Vec3(0.0, 0.6, 0.8)) * 0.55;
  const double eta = 0.1;
  const LaminateField lf = laminate_profile(qbar, eta, Vec3::UnitX());
  const MollifiedLaminate ml = mollify_laminate(lf, 0.01);

  CHECK(ml.transition_fraction() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ml.transition_fraction() <= 0.1 + 0.02);

  for (int k = 0; k < 500; ++k) {
    const double t = eta * k / 500.0;
    CHECK(in_QFr(ml.at(t), 1e-9));
  }

  // Away from transition zones the mollified profile equals the stripes.
  int matches = 0, total = 0;
  for (int k = 0; k < 1000; ++k) {
    const double t = eta * (k + 0.5) / 1000.0;
    ++total;
    if (std::sqrt((ml.at(t) - lf.at(t)).norm2()) <= 1e-12) ++matches;
  }
  CHECK(static_cast<double>(matches) / total >= 0.85);

  CHECK_THROWS_AS(mollify_laminate(lf, eta / 3.0), std::invalid_argument);
}

TEST_CASE("curvature integral scales like 1/delta") {
  const QTensor qbar = QTensor{} * 0.0;
  const LaminateField lf = laminate_profile(qbar, 0.1, Vec3::UnitX());
  const double c1 = mollify_laminate(lf, 0.008).curvature_integral();
  const double c2 = mollify_laminate(lf, 0.004).curvature_integral();
  CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(0.2));

  // Numeric cross-check of the closed form on one transition.
  const MollifiedLaminate ml = mollify_laminate(lf, 0.01);
  const int samples = 200000;
  double num = 0;
  const double h = lf.eta / samples;
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) * h;
    const QTensor dq = (ml.at(t + 0.5 * h) - ml.at(t - 0.5 * h)) * (1.0 / h);
    num += h * dq.norm2();
  }
  num /= lf.eta;
  CHECK(num == doctest::Approx(ml.curvature_integral()).epsilon(1e-3));
}

TEST_CASE("two-variant displacement: symbolic identity and continuity") {
  const Vec3 n = Vec3::UnitX(), m = Vec3::UnitY();
  const TwoVariantDisplacement tv = two_variant_displacement(n, m, 0.4, 0.05);
  REQUIRE(!tv.degenerate);

  // sym(a (x) b) reproduces n(x)n - m(x)m.
  const Mat3 sym_ab = 0.5 * (tv.a * tv.b.transpose() + tv.b * tv.a.transpose());
  const Mat3 target = n * n.transpose() - m * m.transpose();
  CHECK((sym_ab - target).cwiseAbs().maxCoeff() <= 1e-14);

  // Symmetric gradients are the two Frank tensors exactly.
  CHECK((tv.sym_gradient_in(1).mat() - make_frank(n).mat()).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((tv.sym_gradient_in(2).mat() - make_frank(m).mat()).cwiseAbs().maxCoeff() <=
        1e-14);

  // Continuity across sampled interface points: difference of one-sided
  // limits along the stripe normal.
  auto gen = ts::rng(139);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double eps = 1e-13;
  for (int trial = 0; trial < 10000; ++trial) {
    Vec3 x(nd(gen), nd(gen), nd(gen));
    // Snap onto a stripe interface: t = multiple of eta or fraction boundary.
    const double t = x.dot(tv.interface_normal);
    const double period = std::floor(t / tv.eta) * tv.eta;
    const double snap = trial % 2 == 0 ? period : period + tv.fraction * tv.eta;
    x += (snap - t) * tv.interface_normal;
    // Continuity: one-sided limits straddling the interface agree to the
    // probe width; an actual jump would show up at O(1).
    const Vec3 before = tv.eval(x - eps * tv.interface_normal);
    const Vec3 after = tv.eval(x + eps * tv.interface_normal);
    CHECK((after - before).norm() <= 1e-12);
  }

  // Rank-one jump with the interface normal.
  const Mat3 jump = tv.gradient_in(1) - tv.gradient_in(2);
  const Eigen::JacobiSVD<Mat3> svd(jump, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CHECK(svd.singularValues()(1) <= 1e-12);
  const Vec3 right = svd.matrixV().col(0);
  CHECK(std::abs(std::abs(right.dot(tv.interface_normal)) - 1.0) <= 1e-12);

  // Parallel directors degrade to a constant-gradient field.
  const TwoVariantDisplacement deg = two_variant_displacement(n, -n, 0.5, 0.1);
  CHECK(deg.degenerate);
  CHECK((deg.gradient_in(1) - deg.gradient_in(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite-difference gradient inside stripes matches the analytic one") {
  const TwoVariantDisplacement tv =
      two_variant_displacement(Vec3::UnitX(), Vec3(0.0, 0.6, 0.8).normalized(), 0.3, 0.2);
  auto gen = ts::rng(149);
  std::normal_distribution<double> nd(0.0, 0.5);
  const double h = 1e-7;
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 50; ++trial) {
    const Vec3 x(nd(gen), nd(gen), nd(gen));
    const double t = tv.eta > 0 ? std::fmod(std::fmod(x.dot(tv.interface_normal), tv.eta) +
                                                tv.eta,
                                            tv.eta)
                                : 0.0;
    const double w1 = tv.fraction * tv.eta;
    // Stay away from interfaces so the one-sided stencil sees one variant.
    const bool in1 = t > 10 * h && t < w1 - 10 * h;
    const bool in2 = t > w1 + 10 * h && t < tv.eta - 10 * h;
    if (!in1 && !in2) continue;
    ++checked;
    Mat3 fd;
    for (int c = 0; c < 3; ++c) {
      const Vec3 dx = h * Vec3::Unit(c);
      fd.col(c) = (tv.eval(x + dx) - tv.eval(x - dx)) / (2 * h);
    }
    const Mat3 expected = tv.gradient_in(in1 ? 1 : 2);
    CHECK((fd - expected).cwiseAbs().maxCoeff() <= 1e-6);
  }
  CHECK(checked >= 50);
}

TEST_SUITE_END();
