#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "herglotz/errors.hpp"
#include "herglotz/lagrangian.hpp"

using namespace herglotz;

namespace {

HerglotzLagrangian rayleigh_1d(double gamma) {
  return rayleigh(constant_metric(Matrix::Identity(1, 1)),
                  quadratic_potential(Matrix::Identity(1, 1)), gamma);
}

// g(x) = diag(1 + x₁², 2 + sin x₂), so the metric derivative terms matter.
MetricField curved_metric() {
  MetricField m;
  m.dim = 2;
  m.g = [](const Vector& x) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0 + x[0] * x[0];
    g(1, 1) = 2.0 + std::sin(x[1]);
    return g;
  };
  m.dg = [](const Vector& x) {
    Tensor3 d(2, 2, 2);
    d(0, 0, 0) = 2.0 * x[0];
    d(1, 1, 1) = std::cos(x[1]);
    return d;
  };
  return m;
}

Potential cubic_potential() {
  return {[](const Vector& x) { return x[0] * x[0] * x[1] + 0.25 * std::pow(x[1], 4); },
          [](const Vector& x) {
            return (Vector(2) << 2.0 * x[0] * x[1], x[0] * x[0] + std::pow(x[1], 3))
                .finished();
          }};
}

struct Named {
  std::string name;
  HerglotzLagrangian lag;
};

std::vector<Named> builtins() {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  const Matrix kappa = (Matrix(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
  return {
      {"rayleigh", rayleigh(curved_metric(), cubic_potential(), 0.3)},
      {"rigid_body", rigid_body(inertia, 0.05)},
      {"wong", wong_reduced(curved_metric(), kappa, 0.2)},
      {"thermoviscous", thermoviscous(inertia, 0.7, 1.5, 2.0)},
      {"magnetic", magnetic(1.3, curved_metric(), 0.8, cubic_potential(), 0.1)},
  };
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST(Eval, RayleighAtRest) {
  EXPECT_DOUBLE_EQ(rayleigh_1d(0.1).eval(Vector::Ones(1), Vector::Zero(1), 0.0),
                   -0.5);
}

TEST(Eval, RigidBodyQuadraticForm) {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  EXPECT_DOUBLE_EQ(
      rigid_body(inertia, 0.05).eval(Vector(0), Vector::Unit(3, 0), 0.0), 0.5);
}

TEST(Eval, WongZTerm) {
  const auto l = wong_reduced(constant_metric(Matrix::Identity(2, 2)),
                              Matrix::Identity(1, 1), 0.2);
  EXPECT_DOUBLE_EQ(l.eval(Vector::Zero(2), Vector::Zero(3), 1.0), -0.2);
}

TEST(Eval, NonFiniteValueIsFlagged) {
  const auto l = custom("log", 1, 1, [](const Vector& x, const Vector&, double) {
    return std::log(x[0]);
  });
  EXPECT_THROW(l.eval(Vector::Constant(1, -1.0), Vector::Zero(1), 0.0),
               EvaluationError);
}

TEST(Eval, ShapeMismatch) {
  EXPECT_THROW(rayleigh_1d(0.1).eval(Vector::Zero(2), Vector::Zero(1), 0.0),
               ArgumentError);
}

TEST(Eval, PureAndBitIdentical) {
  for (const auto& [name, l] : builtins()) {
    const Vector x = Vector::Constant(l.base_dim(), 0.3);
    const Vector y = Vector::LinSpaced(l.fiber_rank(), -0.4, 0.9);
    const double a = l.eval(x, y, 0.7);
    const double b = l.eval(x, y, 0.7);
    EXPECT_EQ(a, b) << name;
  }
}

TEST(Gradient, Rayleigh1D) {
  const Gradient g =
      rayleigh_1d(0.1).gradient(Vector::Ones(1), Vector::Constant(1, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(g.dx[0], -1.0);
  EXPECT_DOUBLE_EQ(g.dy[0], 2.0);
  EXPECT_DOUBLE_EQ(g.dz, -0.1);
}

TEST(Gradient, ThermoviscousDzIsMinusT0) {
  const Matrix inertia = Matrix::Identity(3, 3);
  const auto l = thermoviscous(inertia, 0.0, 1.7, 0.4);
  EXPECT_EQ(l.gradient(Vector(0), Vector::Ones(3), 5.0).dz, -1.7);
}

TEST(Gradient, RigidBodyMomentum) {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  const Gradient g = rigid_body(inertia, 0.05).gradient(Vector(0), Vector::Ones(3), 0.0);
  EXPECT_EQ(g.dy, (Vector(3) << 1.0, 2.0, 3.0).finished());
}

TEST(Gradient, ThermoviscousMomentumIsPi) {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  const Vector xi = (Vector(3) << 0.3, -0.2, 0.5).finished();
  const Gradient g = thermoviscous(inertia, 0.0, 1.0, 2.0).gradient(Vector(0), xi, 0.0);
  EXPECT_TRUE(g.dy.isApprox(inertia * xi + 2.0 * xi, 1e-15));
}

TEST(Gradient, MagneticMomentum) {
  const MetricField metric = curved_metric();
  const auto l = magnetic(1.3, metric, 0.8, zero_potential(2), 0.1);
  const Vector x = (Vector(2) << 0.4, -0.1).finished();
  const Vector y = (Vector(3) << 0.2, 0.7, 5.0).finished();
  const Gradient g = l.gradient(x, y, 0.0);
  EXPECT_TRUE(g.dy.head(2).isApprox(1.3 * metric.g(x) * y.head(2), 1e-15));
  EXPECT_EQ(g.dy[2], 0.8);
}

TEST(Gradient, ExactAgreesWithFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& [name, l] : builtins()) {
    ASSERT_TRUE(l.fully_exact()) << name;
    for (int trial = 0; trial < 50; ++trial) {
      Vector x(l.base_dim()), y(l.fiber_rank());
      for (Index i = 0; i < x.size(); ++i) x[i] = u(rng);
      for (Index i = 0; i < y.size(); ++i) y[i] = u(rng);
      const double z = u(rng);
      const Gradient exact = l.gradient(x, y, z);
      const Gradient fd = l.fd_gradient(x, y, z, 1e-6);
      for (Index i = 0; i < x.size(); ++i)
        EXPECT_LE(rel_err(exact.dx[i], fd.dx[i]), 1e-6) << name;
      for (Index i = 0; i < y.size(); ++i)
        EXPECT_LE(rel_err(exact.dy[i], fd.dy[i]), 1e-6) << name;
      EXPECT_LE(rel_err(exact.dz, fd.dz), 1e-6) << name;

      const HessianBlocks he = l.hessian_blocks(x, y, z);
      const HessianBlocks hf = l.fd_hessian_blocks(x, y, z, 1e-6);
      EXPECT_LE((he.yy - hf.yy).cwiseAbs().maxCoeff(), 1e-6) << name;
      if (x.size() > 0) {
        EXPECT_LE((he.yx - hf.yx).cwiseAbs().maxCoeff(), 1e-6) << name;
      }
      EXPECT_LE((he.yz - hf.yz).cwiseAbs().maxCoeff(), 1e-6) << name;
    }
  }
}

TEST(Gradient, FallbackMatchesValue) {
  // L = ½y² + y z + x y³ with no registered partials
  const auto l = custom("poly", 1, 1, [](const Vector& x, const Vector& y, double z) {
    return 0.5 * y[0] * y[0] + y[0] * z + x[0] * std::pow(y[0], 3);
  });
  EXPECT_FALSE(l.fully_exact());
  const Vector x = Vector::Constant(1, 0.5);
  const Vector y = Vector::Constant(1, 0.8);
  const Gradient g = l.gradient(x, y, 0.3);
  EXPECT_NEAR(g.dx[0], std::pow(0.8, 3), 1e-9);
  EXPECT_NEAR(g.dy[0], 0.8 + 0.3 + 3 * 0.5 * 0.64, 1e-9);
  EXPECT_NEAR(g.dz, 0.8, 1e-9);
  const HessianBlocks h = l.hessian_blocks(x, y, 0.3);
  EXPECT_NEAR(h.yy(0, 0), 1.0 + 6 * 0.5 * 0.8, 1e-5);
  EXPECT_NEAR(h.yx(0, 0), 3 * 0.64, 1e-5);
  EXPECT_NEAR(h.yz[0], 1.0, 1e-5);
}

TEST(Hessian, ConstantMetricRayleigh) {
  const Matrix g = (Matrix(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
  const auto l = rayleigh(constant_metric(g), zero_potential(2), 0.1);
  const HessianBlocks h = l.hessian_blocks(Vector::Ones(2), Vector::Ones(2), 0.0);
  EXPECT_EQ(h.yy, g);
  EXPECT_EQ(h.yx, Matrix::Zero(2, 2));
  EXPECT_EQ(h.yz, Vector::Zero(2));
}

TEST(Hessian, WongBlockDiagonal) {
  const Matrix kappa = (Matrix(2, 2) << 2.0, 0.3, 0.3, 1.0).finished();
  const MetricField metric = curved_metric();
  const auto l = wong_reduced(metric, kappa, 0.2);
  const Vector x = (Vector(2) << 0.3, 0.1).finished();
  const Matrix h = l.hessian_blocks(x, Vector::Ones(4), 0.0).yy;
  Matrix expected = Matrix::Zero(4, 4);
  expected.topLeftCorner(2, 2) = metric.g(x);
  expected.bottomRightCorner(2, 2) = kappa;
  EXPECT_TRUE(h.isApprox(expected, 1e-15));
}

TEST(Hessian, CrossTermYZ) {
  const auto l = custom("cross", 0, 1, [](const Vector&, const Vector& y, double z) {
    return 0.5 * y[0] * y[0] + y[0] * z;
  });
  EXPECT_NEAR(l.hessian_blocks(Vector(0), Vector::Ones(1), 0.2).yz[0], 1.0, 1e-6);
}

TEST(Hessian, SymmetricForBuiltins) {
  for (const auto& [name, l] : builtins()) {
    const Vector x = Vector::Constant(l.base_dim(), -0.2);
    const Vector y = Vector::LinSpaced(l.fiber_rank(), 0.1, 0.6);
    const Matrix h = l.hessian_blocks(x, y, 0.0).yy;
    EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-10) << name;
  }
}

TEST(Regularity, IdentityMetric) {
  const RegularityInfo info =
      rayleigh_1d(0.1).regularity(Vector::Zero(1), Vector::Zero(1), 0.0);
  EXPECT_DOUBLE_EQ(info.hessian_condition, 1.0);
  EXPECT_TRUE(info.regular);
}

TEST(Regularity, TriaxialBody) {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  const RegularityInfo info =
      rigid_body(inertia, 0.0).regularity(Vector(0), Vector::Zero(3), 0.0);
  EXPECT_NEAR(info.hessian_condition, 3.0, 1e-14);
  EXPECT_TRUE(info.regular);
}

TEST(Regularity, LinearDirectionIsSingular) {
  const auto l = custom("half_linear", 0, 2, [](const Vector&, const Vector& y, double) {
    return 0.5 * y[0] * y[0] + y[1];
  });
  EXPECT_FALSE(l.regularity(Vector(0), Vector::Ones(2), 0.0).regular);
}

TEST(Regularity, ZeroHessianHasInfiniteCondition) {
  const Matrix inertia = Matrix::Identity(2, 2);
  const auto l = magnetic(1.0, constant_metric(inertia), 1.0, zero_potential(2), 0.1);
  EXPECT_TRUE(std::isinf(
      l.regularity(Vector::Zero(2), Vector::Zero(3), 0.0).hessian_condition));
}

TEST(Regularity, MagneticIsRegularOnlyOnBaseBlock) {
  const auto l = magnetic(1.0, constant_metric(Matrix::Identity(2, 2)), 1.0,
                          zero_potential(2), 0.1);
  EXPECT_FALSE(l.regularity(Vector::Zero(2), Vector::Zero(3), 0.0).regular);
  EXPECT_TRUE(l.regularity(Vector::Zero(2), Vector::Zero(3), 0.0, std::vector<Index>{2}).regular);
}

TEST(Regularity, CeilingIsConfigurable) {
  const Matrix inertia = (Vector(3) << 1.0, 1.0, 1e3).finished().asDiagonal();
  const auto l = rigid_body(inertia, 0.0);
  EXPECT_TRUE(l.regularity(Vector(0), Vector::Zero(3), 0.0).regular);
  EXPECT_FALSE(l.regularity(Vector(0), Vector::Zero(3), 0.0, 100.0).regular);
}

TEST(Builders, RejectNonSpd) {
  const Matrix bad = (Vector(3) << 1.0, -1.0, 3.0).finished().asDiagonal();
  EXPECT_THROW(rigid_body(bad, 0.1), ArgumentError);
  const Matrix asym = (Matrix(2, 2) << 1.0, 0.2, 0.0, 1.0).finished();
  EXPECT_THROW(rayleigh(constant_metric(asym), zero_potential(2), 0.1),
               ArgumentError);
  EXPECT_THROW(wong_reduced(constant_metric(Matrix::Identity(2, 2)),
                            -Matrix::Identity(1, 1), 0.1),
               ArgumentError);
}

TEST(Builders, RejectParameterDomain) {
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_THROW(thermoviscous(id, 0.0, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(rigid_body(id, -0.1), ArgumentError);
  EXPECT_THROW(magnetic(0.0, constant_metric(Matrix::Identity(2, 2)), 1.0,
                        zero_potential(2), 0.1),
               ArgumentError);
}

TEST(Builders, ThermoviscousValue) {
  const Matrix inertia = (Vector(3) << 1.0, 2.0, 3.0).finished().asDiagonal();
  const Vector xi = (Vector(3) << 0.3, -0.2, 0.5).finished();
  const double u = 0.7, t0 = 1.5, gamma = 2.0, s = 0.4;
  const double expected = 0.5 * xi.dot(inertia * xi) - u - t0 * s +
                          gamma / (2 * t0) * xi.squaredNorm();
  EXPECT_NEAR(thermoviscous(inertia, u, t0, gamma).eval(Vector(0), xi, s),
              expected, 1e-15);
}
