#include <doctest.h>

#include <cmath>

#include "nematoplate/qtensor.hpp"
#include "test_support.hpp"

using namespace nematoplate;
namespace ts = testsupport;

TEST_SUITE_BEGIN("qtensor");

TEST_CASE("eigensolver reconstructs and stays orthonormal") {
  auto gen = ts::rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    Mat3 m = ts::random_symmetric(gen, trial % 5 == 0 ? 1e-4 : 1.0);
    if (trial % 7 == 0) {
      // Exactly repeated eigenvalues.
      const Mat3 r = ts::random_rotation(gen);
      Vec3 d(0.5, 0.5, trial % 14 == 0 ? 0.5 : -0.2);
      m = r * d.asDiagonal() * r.transpose();
      m = 0.5 * (m + m.transpose());
    }
    const SpectralData sd = eig_sym3(m);
    const Mat3 rec =
        sd.eigvecs * sd.eigvals.asDiagonal() * sd.eigvecs.transpose();
    CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()));
    CHECK((sd.eigvecs.transpose() * sd.eigvecs - Mat3::Identity()).cwiseAbs().maxCoeff() <=
          1e-10);
    CHECK(sd.eigvals(0) >= sd.eigvals(1));
    CHECK(sd.eigvals(1) >= sd.eigvals(2));
  }
}

TEST_CASE("eigensolver under adversarial gaps and scales") {
  auto gen = ts::rng(13);
  const double gaps[] = {0.0, 1e-12, 1e-8, 1e-4};
  const double scales[] = {1e-8, 1.0, 1e8};
  for (double gap : gaps)
    for (double scale : scales)
      for (int trial = 0; trial < 20; ++trial) {
        const Mat3 r = ts::random_rotation(gen);
        const Vec3 d(scale * (0.3 + gap), scale * 0.3, scale * -0.6);
        Mat3 m = r * d.asDiagonal() * r.transpose();
        m = 0.5 * (m + m.transpose());
        const SpectralData sd = eig_sym3(m);
        const Mat3 rec = sd.eigvecs * sd.eigvals.asDiagonal() * sd.eigvecs.transpose();
        CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK((sd.eigvecs.transpose() * sd.eigvecs - Mat3::Identity())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
      }
}

TEST_CASE("uniaxial membership agrees with the algebraic characterization") {
  // Uniaxial tensors satisfy |Q|^6 = 54 det(Q)^2; the eigenvalue-gap test
  // must agree with the algebraic residual on both members and non-members.
  auto gen = ts::rng(17);
  std::uniform_real_distribution<double> us(-0.5, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const QTensor q = make_uniaxial(us(gen), ts::random_unit(gen));
    const Mat3 m = q.mat();
    const double lhs = std::pow(m.squaredNorm(), 3);
    const double rhs = 54.0 * m.determinant() * m.determinant();
    CHECK(std::abs(lhs - rhs) <= 1e-10);
    CHECK(in_QU(q));
  }
  // A genuinely biaxial member (three distinct eigenvalues) violates both.
  // Note the equal-weight mixture of two Frank states is oblate uniaxial.
  const QTensor biax =
      make_frank(Vec3::UnitX()) * 0.6 + make_frank(Vec3::UnitY()) * 0.4;
  const Mat3 mb = biax.mat();
  CHECK(std::abs(std::pow(mb.squaredNorm(), 3) -
                 54.0 * mb.determinant() * mb.determinant()) > 1e-3);
  CHECK(!in_QU(biax, 1e-6));
  CHECK(in_QB(biax));
}

TEST_CASE("make_frank worked values") {
  const QTensor q = make_frank(Vec3::UnitZ());
  CHECK(q.zz == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(q.xx == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(q.xy == doctest::Approx(0.0));

  // Tilted director of the actuation example.
  const Vec3 n = (Vec3::UnitX() + Vec3::UnitZ()).normalized();
  const QTensor qt = make_frank(n);
  CHECK(qt.xx == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(qt.yy == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(qt.zz == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(qt.xz == doctest::Approx(0.5).epsilon(1e-12));

  // Head-tail symmetry.
  const QTensor qm = make_frank(-Vec3::UnitZ());
  CHECK((qm.mat() - q.mat()).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(make_frank(Vec3(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("make_uniaxial worked values and range") {
  const QTensor frank = make_frank(Vec3::UnitZ());
  const QTensor q1 = make_uniaxial(1.0, Vec3::UnitZ());
  CHECK((q1.mat() - frank.mat()).cwiseAbs().maxCoeff() <= 1e-15);
  const QTensor q0 = make_uniaxial(0.0, Vec3::UnitX());
  CHECK(q0.mat().cwiseAbs().maxCoeff() == 0.0);
  const QTensor qh = make_uniaxial(0.5, Vec3::UnitZ());
  CHECK(qh.zz == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(qh.xx == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(in_QU(qh));
  CHECK_THROWS_AS(make_uniaxial(1.2, Vec3::UnitZ()), std::invalid_argument);
  CHECK_THROWS_AS(make_uniaxial(-0.6, Vec3::UnitZ()), std::invalid_argument);
}

TEST_CASE("set inclusion chain") {
  auto gen = ts::rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const QTensor f = make_frank(ts::random_unit(gen));
    CHECK(in_QFr(f));
    CHECK(in_QU(f));
    CHECK(in_QB(f));
  }
  const QTensor b = project_QB(ts::random_symmetric(gen));
  CHECK(in_QB(b));
}

TEST_CASE("eigenvalue projection worked values") {
  const auto p1 = project_eigs_QB({2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0});
  CHECK(p1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p1[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));

  const auto p2 = project_eigs_QB({0.0, 0.0, 1.0});
  CHECK(p2[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(p2[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(p2[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

  const auto p3 = project_eigs_QB({0.0, 0.0, 3.0});
  CHECK(p3[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(p3[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("eigenvalue projection against the dense grid oracle") {
  auto gen = ts::rng(31);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 lam(ud(gen), ud(gen), ud(gen));
    const auto p = project_eigs_QB({lam(0), lam(1), lam(2)});
    double d = 0;
    for (int i = 0; i < 3; ++i) d += (p[i] - lam(i)) * (p[i] - lam(i));
    const double grid_best = ts::polytope_grid_min_dist2(lam);
    // The grid is a subset of the polytope, so it cannot beat the projection
    // by more than its own resolution.
    CHECK(d <= grid_best + 1e-9);
    CHECK(std::abs(p[0] + p[1] + p[2]) <= 1e-12);
  }
}

TEST_CASE("projection matches Dykstra on random matrices") {
  auto gen = ts::rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat3 m = ts::random_symmetric(gen, trial % 3 == 0 ? 3.0 : 0.5);
    const Mat3 p = project_QB(m).mat();
    const Mat3 d = ts::dykstra_project_QB(m);
    CHECK((p - d).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("projection identity, idempotence, variational inequality") {
  auto gen = ts::rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat3 m = ts::random_symmetric(gen, 2.0);
    const QTensor p = project_QB(m);
    CHECK(in_QB(p, 1e-9));
    const QTensor pp = project_QB(p.mat());
    CHECK((pp.mat() - p.mat()).cwiseAbs().maxCoeff() <= 1e-12);
    // Variational inequality <M - P, Q - P> <= 0 for Q in Q_B.
    for (int k = 0; k < 10; ++k) {
      const QTensor q = project_QB(ts::random_symmetric(gen, 0.7));
      const double ip = ((0.5 * (m + m.transpose()) - p.mat()).cwiseProduct(
                             q.mat() - p.mat()))
                            .sum();
      CHECK(ip <= 1e-9);
    }
  }
  // Members project to themselves.
  const QTensor f = make_frank(Vec3::UnitY());
  CHECK((project_QB(f.mat()).mat() - f.mat()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(project_QB(Mat3::Zero()).mat().cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("projection commutes with rotations") {
  auto gen = ts::rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 m = ts::random_symmetric(gen, 1.5);
    const Mat3 r = ts::random_rotation(gen);
    const Mat3 lhs = project_QB(r * m * r.transpose()).mat();
    const Mat3 rhs = r * project_QB(m).mat() * r.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("dist2 worked values and gradient") {
  Mat3 m = Mat3::Zero();
  m(2, 2) = 1.0;
  const Dist2Result d1 = dist2_QB(m);
  CHECK(d1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  m(2, 2) = 3.0;
  const Dist2Result d3 = dist2_QB(m);
  CHECK(d3.value == doctest::Approx(17.0 / 3.0).epsilon(1e-12));

  const Dist2Result dz = dist2_QB(make_frank(Vec3::UnitX()).mat());
  CHECK(dz.value <= 1e-20);
  CHECK(dz.gradient.cwiseAbs().maxCoeff() <= 1e-10);

  // Gradient against central differences on the six independent entries.
  auto gen = ts::rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat3 a = ts::random_symmetric(gen, 1.2);
    const Dist2Result d = dist2_QB(a);
    const double step = 1e-5;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Mat3 ap = a, am = a;
        ap(i, j) += step;
        ap(j, i) = ap(i, j);
        am(i, j) -= step;
        am(j, i) = am(i, j);
        const double fd = (dist2_QB(ap).value - dist2_QB(am).value) / (2.0 * step);
        const double an = (i == j ? 1.0 : 2.0) * d.gradient(i, j);
        CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(fd)));
      }
  }
}

TEST_CASE("frank decomposition") {
  const FrankDecomposition f0 = frank_decomposition(QTensor{});
  CHECK(f0.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(f0.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const FrankDecomposition fe3 = frank_decomposition(make_frank(Vec3::UnitZ()));
  CHECK(fe3.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fe3.directions[0].z()) == doctest::Approx(1.0).epsilon(1e-12));

  const FrankDecomposition fu = frank_decomposition(make_uniaxial(0.5, Vec3::UnitZ()));
  CHECK(fu.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(fu.weights[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // Reconstruction within 1e-10 on random members.
  auto gen = ts::rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const QTensor q = project_QB(ts::random_symmetric(gen));
    const FrankDecomposition fd = frank_decomposition(q);
    Mat3 rec = Mat3::Zero();
    double wsum = 0;
    for (int k = 0; k < 3; ++k) {
      rec += fd.weights[k] * (fd.directions[k] * fd.directions[k].transpose() -
                              Mat3::Identity() / 3.0);
      wsum += fd.weights[k];
      CHECK(fd.weights[k] >= -1e-9);
      CHECK(fd.weights[k] <= 1.0 + 1e-9);
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((rec - q.mat()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  Mat3 outside = Mat3::Zero();
  outside(2, 2) = 3.0;
  CHECK_THROWS_AS(frank_decomposition(QTensor::from_mat(outside)), std::invalid_argument);
}

TEST_SUITE_END();
