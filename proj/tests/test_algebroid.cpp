#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "herglotz/algebroid.hpp"
#include "herglotz/errors.hpp"

using namespace herglotz;

namespace {

std::function<Matrix(const Vector&)> nonlinear_connection() {
  return [](const Vector& q) {
    Matrix a(3, 2);
    a << std::sin(q[1]), 0.3 * q[0] * q[0], q[0] * q[1], std::cos(q[0]), 0.2,
        q[1];
    return a;
  };
}

Tensor3 perturbed_so3(Index g, Index a, Index b, double value) {
  Tensor3 c = levi_civita();
  c(g, a, b) = value;
  c(g, b, a) = -value;
  return c;
}

}  // namespace

TEST(Anchor, TangentBundleIsIdentity) {
  const AlgebroidChart tb = tangent_bundle(2);
  const Vector x = (Vector(2) << 0.3, -1.7).finished();
  EXPECT_TRUE(tb.anchor(x).isApprox(Matrix::Identity(2, 2)));
}

TEST(Anchor, LieAlgebraHasEmptyAnchor) {
  const Matrix rho = so3().anchor(Vector(0));
  EXPECT_EQ(rho.rows(), 0);
  EXPECT_EQ(rho.cols(), 3);
}

TEST(Anchor, AtiyahAnchorIsIdentityThenZero) {
  const AlgebroidChart chart = atiyah_chart(
      2, 1, [](const Vector&) { return Matrix::Zero(1, 2).eval(); },
      [](const Vector&) { return Tensor3(1, 2, 2); }, Tensor3(1, 1, 1));
  Matrix expected = Matrix::Zero(2, 3);
  expected.leftCols(2).setIdentity();
  EXPECT_EQ(chart.anchor(Vector::Zero(2)), expected);
}

TEST(Anchor, NonFiniteEntryNamesIndex) {
  AlgebroidChart bad(
      "bad", 1, 2,
      [](const Vector&) {
        Matrix m(1, 2);
        m << 1.0, std::numeric_limits<double>::quiet_NaN();
        return m;
      },
      [](const Vector&) { return Tensor3(2, 2, 2); });
  try {
    bad.anchor(Vector::Zero(1));
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 1)"), std::string::npos)
        << e.what();
  }
}

TEST(Anchor, WrongBaseDimensionIsArgumentError) {
  EXPECT_THROW(tangent_bundle(2).anchor(Vector::Zero(3)), ArgumentError);
}

TEST(Structure, TangentBundleIsZero) {
  EXPECT_EQ(tangent_bundle(3).structure(Vector::Ones(3)).max_abs(), 0.0);
}

TEST(Structure, So3IsLeviCivita) {
  const Tensor3 c = so3().structure(Vector(0));
  EXPECT_EQ(c(2, 0, 1), 1.0);
  EXPECT_EQ(c(0, 1, 2), 1.0);
  EXPECT_EQ(c(1, 2, 0), 1.0);
  EXPECT_EQ(c(2, 1, 0), -1.0);
  EXPECT_EQ(c(0, 0, 1), 0.0);
}

TEST(Structure, AtiyahBracketTable) {
  const Tensor3 c = levi_civita();
  const auto conn = nonlinear_connection();
  auto curv = [](const Vector&) {
    Tensor3 b(3, 2, 2);
    b(0, 0, 1) = 0.7;
    b(0, 1, 0) = -0.7;
    b(2, 0, 1) = -0.4;
    b(2, 1, 0) = 0.4;
    return b;
  };
  const AlgebroidChart chart = atiyah_chart(2, 3, conn, curv, c);
  const Vector q = (Vector(2) << 0.2, -0.5).finished();
  const Tensor3 s = chart.structure(q);
  const Matrix a = conn(q);
  // [e_0, e_1] = −𝓑^A_{01} ê_A
  EXPECT_DOUBLE_EQ(s(2, 0, 1), -0.7);
  EXPECT_DOUBLE_EQ(s(4, 0, 1), 0.4);
  EXPECT_DOUBLE_EQ(s(3, 0, 1), 0.0);
  // [e_i, ê_A] = c^C_{AB} 𝓐^B_i ê_C, here i = 1, A = 0 → C = 2 uses B = 1
  EXPECT_DOUBLE_EQ(s(2 + 2, 1, 2 + 0), c(2, 0, 1) * a(1, 1));
  EXPECT_DOUBLE_EQ(s(2 + 1, 1, 2 + 0), c(1, 0, 2) * a(2, 1));
  // [ê_A, ê_B] = c^C_{AB} ê_C
  EXPECT_DOUBLE_EQ(s(2 + 2, 2 + 0, 2 + 1), 1.0);
}

TEST(Structure, OutputIsExactlySkew) {
  std::vector<AlgebroidChart> charts = {tangent_bundle(2), so3(),
                                        so3_action_on_r3()};
  const auto conn = nonlinear_connection();
  charts.push_back(atiyah_chart(
      2, 3, conn, curvature_from_connection(2, 3, conn, levi_civita()),
      levi_civita()));
  for (const AlgebroidChart& chart : charts) {
    for (const Vector& x : default_sample_points(chart.base_dim(), 10)) {
      const Tensor3 c = chart.structure(x);
      const Tensor3 twice = c.antisymmetrized();
      for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_EQ(twice.data()[k], c.data()[k]) << chart.label();
      }
    }
  }
}

TEST(Validate, So3PassesExactly) {
  const auto report =
      validate_identities(so3(), default_sample_points(0, 5), 1e-5, 1e-14);
  EXPECT_LE(report.max_jacobi_residual, 1e-14);
  EXPECT_TRUE(report.passed);
}

TEST(Validate, PerturbedSo3IsRejected) {
  // [e1, e2] = e3 + 0.1 e1: Jacobi residual 0.1 at every point
  const auto report = validate_identities(
      lie_algebra(perturbed_so3(0, 0, 1, 0.1)), {Vector(0)}, 1e-5, 1e-6);
  EXPECT_NEAR(report.max_jacobi_residual, 0.1, 1e-15);
  EXPECT_FALSE(report.passed);
}

TEST(Validate, RescaledSo3ConstantIsStillALieAlgebra) {
  // [e1, e2] = 1.1 e3 is a valid (rescaled) bracket, so Jacobi holds.
  const auto report = validate_identities(
      lie_algebra(perturbed_so3(2, 0, 1, 1.1)), {Vector(0)}, 1e-5, 1e-6);
  EXPECT_EQ(report.max_jacobi_residual, 0.0);
  EXPECT_TRUE(report.passed);
}

TEST(Validate, So3ActionOnR3Compatible) {
  const AlgebroidChart chart = so3_action_on_r3();
  const auto report =
      validate_identities(chart, default_sample_points(3), 1e-5, 1e-6);
  EXPECT_LE(report.max_compat_residual, 1e-6);
  EXPECT_TRUE(report.passed);
}

TEST(Validate, So3ActionWithFiniteDifferenceAnchor) {
  auto generators = [](const Vector& x) -> Matrix {
    const Eigen::Vector3d p = x.head<3>();
    Matrix rho(3, 3);
    for (int a = 0; a < 3; ++a) rho.col(a) = p.cross(Eigen::Vector3d::Unit(a));
    return rho;
  };
  const AlgebroidChart chart = action_algebroid(3, generators, levi_civita());
  EXPECT_FALSE(chart.has_exact_anchor_derivative());
  EXPECT_TRUE(
      validate_identities(chart, default_sample_points(3), 1e-5, 1e-6).passed);
}

TEST(Validate, LeftActionFieldsFailCompatibility) {
  auto generators = [](const Vector& x) -> Matrix {
    const Eigen::Vector3d p = x.head<3>();
    Matrix rho(3, 3);
    for (int a = 0; a < 3; ++a) rho.col(a) = Eigen::Vector3d::Unit(a).cross(p);
    return rho;
  };
  const auto report = validate_identities(
      action_algebroid(3, generators, levi_civita()), default_sample_points(3),
      1e-5, 1e-6);
  EXPECT_GT(report.max_compat_residual, 1e-2);
  EXPECT_FALSE(report.passed);
}

TEST(Validate, AbelianAtiyahConstantCurvature) {
  auto conn = [](const Vector& q) {
    return (Matrix(1, 2) << -0.5 * q[1], 0.5 * q[0]).finished();
  };
  auto curv = [](const Vector&) {
    Tensor3 b(1, 2, 2);
    b(0, 0, 1) = 1.0;
    b(0, 1, 0) = -1.0;
    return b;
  };
  const auto report =
      validate_identities(atiyah_chart(2, 1, conn, curv, Tensor3(1, 1, 1)),
                          default_sample_points(2), 1e-5, 1e-6);
  EXPECT_TRUE(report.passed);
}

TEST(Validate, NonAbelianAtiyahWithDerivedCurvature) {
  const auto conn = nonlinear_connection();
  const AlgebroidChart chart = atiyah_chart(
      2, 3, conn, curvature_from_connection(2, 3, conn, levi_civita()),
      levi_civita());
  const auto report =
      validate_identities(chart, default_sample_points(2), 1e-5, 1e-6);
  EXPECT_TRUE(report.passed) << report.max_jacobi_residual;
}

TEST(Validate, NonAbelianAtiyahWithWrongCurvatureFails) {
  // Dropping the quadratic term breaks Jacobi for a non-abelian group.
  const auto conn = nonlinear_connection();
  const AlgebroidChart chart = atiyah_chart(
      2, 3, conn, curvature_from_connection(2, 3, conn, Tensor3(3, 3, 3)),
      levi_civita());
  const auto report =
      validate_identities(chart, default_sample_points(2), 1e-5, 1e-6);
  EXPECT_GT(report.max_jacobi_residual, 1e-3);
  EXPECT_FALSE(report.passed);
}

TEST(Validate, EmptyPointsIsArgumentError) {
  EXPECT_THROW(validate_identities(so3(), {}, 1e-5, 1e-6), ArgumentError);
}

TEST(Validate, SamplePointsAreReproducible) {
  const auto a = default_sample_points(3, 100, 42);
  const auto b = default_sample_points(3, 100, 42);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    EXPECT_LE(a[k].cwiseAbs().maxCoeff(), 1.0);
  }
  EXPECT_NE(default_sample_points(3, 1, 43)[0], a[0]);
}

TEST(Admissibility, TangentBundleZero) {
  const Vector y = (Vector(2) << 0.4, -2.0).finished();
  EXPECT_EQ(admissibility_residual(tangent_bundle(2), Vector::Ones(2), y, y),
            Vector::Zero(2));
}

TEST(Admissibility, LieAlgebraEmpty) {
  EXPECT_EQ(
      admissibility_residual(so3(), Vector(0), Vector(0), Vector::Ones(3)).size(),
      0);
}

TEST(Admissibility, Arithmetic) {
  AlgebroidChart chart(
      "row", 1, 2, [](const Vector&) { return (Matrix(1, 2) << 1.0, 0.0).finished(); },
      [](const Vector&) { return Tensor3(2, 2, 2); });
  const Vector r = admissibility_residual(chart, Vector::Zero(1),
                                          Vector::Constant(1, 3.0),
                                          (Vector(2) << 2.0, 0.0).finished());
  EXPECT_EQ(r[0], 1.0);
}

TEST(Admissibility, DimensionMismatch) {
  EXPECT_THROW(admissibility_residual(tangent_bundle(2), Vector::Zero(2),
                                      Vector::Zero(3), Vector::Zero(2)),
               ArgumentError);
}

TEST(Admissibility, AnchorImageIsAdmissible) {
  const AlgebroidChart chart = so3_action_on_r3();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    EXPECT_EQ(admissibility_residual(chart, x, chart.anchor(x) * y, y),
              Vector::Zero(3));
  }
}

TEST(Builders, LieAlgebraRejectsNonSkew) {
  Tensor3 c = levi_civita();
  c(0, 0, 0) = 1.0;
  EXPECT_THROW(lie_algebra(c), ArgumentError);
  c = levi_civita();
  c(2, 1, 0) = 0.0;
  EXPECT_THROW(lie_algebra(c), ArgumentError);
}

TEST(Builders, ShapeErrors) {
  EXPECT_THROW(lie_algebra(Tensor3(2, 3, 3)), ArgumentError);
  EXPECT_THROW(tangent_bundle(0), ArgumentError);
  EXPECT_THROW(atiyah_chart(
                   2, 1, [](const Vector&) { return Matrix::Zero(1, 2).eval(); },
                   [](const Vector&) { return Tensor3(1, 2, 2); },
                   Tensor3(2, 2, 2)),
               ArgumentError);
}

TEST(Builders, AtiyahConnectionWithWrongShapeFailsOnEvaluation) {
  const AlgebroidChart chart = atiyah_chart(
      2, 1, [](const Vector&) { return Matrix::Zero(2, 2).eval(); },
      [](const Vector&) { return Tensor3(1, 2, 2); }, Tensor3(1, 1, 1));
  EXPECT_THROW(chart.structure(Vector::Zero(2)), EvaluationError);
}

TEST(Builders, EveryBuilderPassesValidation) {
  const auto conn = nonlinear_connection();
  std::vector<AlgebroidChart> charts = {
      tangent_bundle(1), tangent_bundle(3), so3(), so3_action_on_r3(),
      atiyah_chart(2, 3, conn,
                   curvature_from_connection(2, 3, conn, levi_civita()),
                   levi_civita())};
  for (const AlgebroidChart& chart : charts) {
    EXPECT_TRUE(validate_identities(chart, default_sample_points(chart.base_dim()),
                                    1e-5, 1e-6)
                    .passed)
        << chart.label();
  }
}
