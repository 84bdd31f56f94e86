#include <gtest/gtest.h>

#include <cmath>

#include "herglotz/algebroid.hpp"
#include "herglotz/dynamics.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/lagrangian.hpp"
#include "herglotz/scenarios.hpp"

using namespace herglotz;

namespace {

HerglotzLagrangian rayleigh_1d(double gamma) {
  return rayleigh(constant_metric(Matrix::Identity(1, 1)),
                  quadratic_potential(Matrix::Identity(1, 1)), gamma);
}

State state_1d(double x, double y, double z = 0.0) {
  return {Vector::Constant(1, x), Vector::Constant(1, y), z, 0.0};
}

// Underdamped x'' + γx' + x = 0 with x(0) = 1, x'(0) = 0.
double damped_x(double gamma, double t) {
  const double w = std::sqrt(1.0 - 0.25 * gamma * gamma);
  return std::exp(-0.5 * gamma * t) *
         (std::cos(w * t) + 0.5 * gamma / w * std::sin(w * t));
}

IntegratorConfig rk4(double h) {
  IntegratorConfig c;
  c.step = h;
  return c;
}

}  // namespace

TEST(Rhs, RayleighAtRest) {
  const StateRate r = elh_rhs(tangent_bundle(1), rayleigh_1d(0.1), state_1d(1.0, 0.0));
  EXPECT_DOUBLE_EQ(r.xdot[0], 0.0);
  EXPECT_DOUBLE_EQ(r.ydot[0], -1.0);
  EXPECT_DOUBLE_EQ(r.zdot, -0.5);
  EXPECT_DOUBLE_EQ(r.elldot, -0.1);
}

TEST(Rhs, RayleighMoving) {
  const StateRate r = elh_rhs(tangent_bundle(1), rayleigh_1d(0.1), state_1d(0.0, 2.0));
  EXPECT_DOUBLE_EQ(r.xdot[0], 2.0);
  EXPECT_NEAR(r.ydot[0], -0.2, 1e-15);
  EXPECT_DOUBLE_EQ(r.zdot, 2.0);
}

TEST(Rhs, RigidBodyEulerEquations) {
  const Vector inertia = (Vector(3) << 1.0, 2.0, 3.0).finished();
  const Vector xi = (Vector(3) << 0.3, -0.4, 0.5).finished();
  const double gamma = 0.05;
  const State s{Vector(0), xi, 0.0, 0.0};
  const StateRate r =
      elh_rhs(so3(), rigid_body(inertia.asDiagonal(), gamma), s);
  const Eigen::Vector3d m = inertia.cwiseProduct(xi);
  const Eigen::Vector3d w = xi;
  const Vector expected = (m.cross(w) - gamma * m).cwiseQuotient(inertia);
  EXPECT_LE((r.ydot - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Rhs, FrozenComponentHasZeroRate) {
  const Scenario s = magnetic_scenario();
  const StateRate r = elh_rhs(s.chart, s.lagrangian, s.initial, s.default_config());
  EXPECT_EQ(r.ydot[2], 0.0);
}

TEST(Rhs, SingularHessianRaises) {
  const auto l = custom("linear", 1, 1, [](const Vector& x, const Vector& y, double) {
    return y[0] - 0.5 * x[0] * x[0];
  });
  try {
    elh_rhs(tangent_bundle(1), l, state_1d(1.0, 1.0));
    FAIL() << "expected RegularityError";
  } catch (const RegularityError& e) {
    EXPECT_TRUE(std::isnan(e.time()));
  }
}

TEST(Rhs, ShapeMismatch) {
  const State bad{Vector::Zero(2), Vector::Zero(1), 0.0, 0.0};
  EXPECT_THROW(elh_rhs(tangent_bundle(1), rayleigh_1d(0.1), bad), ArgumentError);
}

TEST(Integrate, RayleighClosedForm) {
  const Trajectory t = integrate(tangent_bundle(1), rayleigh_1d(0.1),
                                 state_1d(1.0, 0.0), 10.0, rk4(1e-3));
  ASSERT_EQ(t.size(), 10001u);
  EXPECT_TRUE(t.is_uniform());
  EXPECT_DOUBLE_EQ(t.times[1000], 1.0);
  EXPECT_NEAR(t.states[1000].x[0], 0.554991720618, 1e-10);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k)
    worst = std::max(worst, std::abs(t.states[k].x[0] - damped_x(0.1, t.times[k])));
  EXPECT_LE(worst, 1e-10);
  // ell = γt exactly, so λ = e^{−γt}
  EXPECT_NEAR(t.states.back().ell, -1.0, 1e-12);
}

TEST(Integrate, ActionMatchesQuadrature) {
  // z(t) = ∫ L dt with L along the closed-form solution
  const double gamma = 0.1;
  const Trajectory t = integrate(tangent_bundle(1), rayleigh_1d(gamma),
                                 state_1d(1.0, 0.0), 2.0, rk4(1e-3));
  double z = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const auto lag = [&](std::size_t j) {
      const State& s = t.states[j];
      return 0.5 * s.y[0] * s.y[0] - 0.5 * s.x[0] * s.x[0] - gamma * s.z;
    };
    z += 0.5 * (lag(k - 1) + lag(k)) * (t.times[k] - t.times[k - 1]);
  }
  EXPECT_NEAR(t.states.back().z, z, 1e-5);
}

TEST(Integrate, PartialFinalStep) {
  const Trajectory t = integrate(tangent_bundle(1), rayleigh_1d(0.1),
                                 state_1d(1.0, 0.0), 1.05, rk4(0.1));
  ASSERT_EQ(t.size(), 12u);
  EXPECT_DOUBLE_EQ(t.times.back(), 1.05);
  EXPECT_FALSE(t.is_uniform());
  EXPECT_NEAR(t.states.back().x[0], damped_x(0.1, 1.05), 1e-5);
}

TEST(Integrate, FourthOrderConvergence) {
  const Scenario s = rigid_body_scenario();
  const auto at_one = [&](double h) {
    IntegratorConfig c = rk4(h);
    return integrate(s.chart, s.lagrangian, s.initial, 1.0, c).states.back();
  };
  const State ref = at_one(1e-4);
  const double e1 = (at_one(0.04).y - ref.y).norm();
  const double e2 = (at_one(0.02).y - ref.y).norm();
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.2);
}

TEST(Integrate, AdaptiveMatchesClosedForm) {
  IntegratorConfig c;
  c.method = Method::rk45_adaptive;
  c.step = 0.01;
  c.rel_tol = 1e-10;
  c.abs_tol = 1e-12;
  const Trajectory t = integrate(tangent_bundle(1), rayleigh_1d(0.1),
                                 state_1d(1.0, 0.0), 10.0, c);
  ASSERT_EQ(t.size(), 1001u);
  EXPECT_TRUE(t.is_uniform());
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k)
    worst = std::max(worst, std::abs(t.states[k].x[0] - damped_x(0.1, t.times[k])));
  EXPECT_LE(worst, 1e-8);
}

TEST(Integrate, Deterministic) {
  const Scenario s = wong_scenario();
  const auto cfg = s.default_config(1e-2);
  const Trajectory a = integrate(s.chart, s.lagrangian, s.initial, 2.0, cfg);
  const Trajectory b = integrate(s.chart, s.lagrangian, s.initial, 2.0, cfg);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.states[k].x, b.states[k].x);
    EXPECT_EQ(a.states[k].y, b.states[k].y);
    EXPECT_EQ(a.states[k].z, b.states[k].z);
  }
}

TEST(Integrate, RejectsBadArguments) {
  const auto chart = tangent_bundle(1);
  const auto l = rayleigh_1d(0.1);
  EXPECT_THROW(integrate(chart, l, state_1d(1.0, 0.0), -1.0, rk4(1e-3)), ArgumentError);
  EXPECT_THROW(integrate(chart, l, state_1d(1.0, 0.0), 1.0, rk4(0.0)), ArgumentError);
  State nonzero_ell = state_1d(1.0, 0.0);
  nonzero_ell.ell = 0.5;
  EXPECT_THROW(integrate(chart, l, nonzero_ell, 1.0, rk4(1e-3)), ArgumentError);
  IntegratorConfig bad_frozen = rk4(1e-3);
  bad_frozen.frozen_fiber = {3};
  EXPECT_THROW(integrate(chart, l, state_1d(1.0, 0.0), 1.0, bad_frozen), ArgumentError);
}

TEST(Integrate, RegularityFailureCarriesTime) {
  // W = 1 − x² degenerates when x reaches 1
  const auto l = custom("degenerate", 1, 1, [](const Vector& x, const Vector& y, double) {
    return 0.5 * (1.0 - x[0] * x[0]) * y[0] * y[0];
  });
  IntegratorConfig c = rk4(1e-3);
  c.condition_ceiling = 1e6;
  try {
    integrate(tangent_bundle(1), l, state_1d(0.0, 1.0), 5.0, c);
    FAIL() << "expected RegularityError";
  } catch (const RegularityError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 5.0);
  }
}

TEST(Integrate, BlowUpIsNumericError) {
  // ẍ = x³ from x = ẋ = 1 escapes in finite time
  const auto l = custom("blowup", 1, 1, [](const Vector& x, const Vector& y, double) {
    return 0.5 * y[0] * y[0] + 0.25 * std::pow(x[0], 4);
  });
  EXPECT_THROW(integrate(tangent_bundle(1), l, state_1d(1.0, 1.0), 100.0, rk4(1e-2)),
               NumericError);
}

TEST(Integrate, MaxStepsExceeded) {
  IntegratorConfig c = rk4(1e-3);
  c.max_steps = 10;
  EXPECT_THROW(integrate(tangent_bundle(1), rayleigh_1d(0.1), state_1d(1.0, 0.0), 1.0, c),
               NumericError);
}

TEST(Residual, SecondOrderInStep) {
  const Scenario s = rigid_body_scenario();
  const auto residual = [&](double h) {
    const Trajectory t =
        integrate(s.chart, s.lagrangian, s.initial, 2.0, s.default_config(h));
    return elh_residual(s.chart, s.lagrangian, t);
  };
  const double r1 = residual(2e-3);
  const double r2 = residual(1e-3);
  EXPECT_LE(r2, 1e-5);
  EXPECT_NEAR(r1 / r2, 4.0, 0.1);
}

TEST(Residual, CovectorCountAndShape) {
  const Scenario s = wong_scenario();
  const Trajectory t =
      integrate(s.chart, s.lagrangian, s.initial, 0.1, s.default_config(1e-2));
  const auto cov = elh_residual_covectors(s.chart, s.lagrangian, t);
  ASSERT_EQ(cov.size(), t.size() - 2);
  EXPECT_EQ(cov.front().size(), s.chart.fiber_rank());
}

TEST(Residual, DetectsWrongTrajectory) {
  const Scenario s = rayleigh_scenario();
  Trajectory t = integrate(s.chart, s.lagrangian, s.initial, 1.0, s.default_config());
  for (State& st : t.states) st.y *= 1.01;
  EXPECT_GT(elh_residual(s.chart, s.lagrangian, t), 1e-3);
}

TEST(Residual, RequiresUniformGrid) {
  const Trajectory t = integrate(tangent_bundle(1), rayleigh_1d(0.1),
                                 state_1d(1.0, 0.0), 1.05, rk4(0.1));
  EXPECT_THROW(elh_residual(tangent_bundle(1), rayleigh_1d(0.1), t), ArgumentError);
}
