#pragma once

#include <functional>
#include <string>
#include <vector>

#include "herglotz/algebroid.hpp"
#include "herglotz/dynamics.hpp"
#include "herglotz/invariants.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

/// Closed-form prediction checked against an integrated trajectory. `measure`
/// returns a nonnegative deviation; the law holds when it is ≤ tolerance.
struct ReferenceLaw {
  std::string name;
  double tolerance = 0.0;
  std::function<double(const Trajectory&, const InvariantLog&)> measure;
};

struct Scenario {
  std::string name;
  AlgebroidChart chart;
  HerglotzLagrangian lagrangian;
  std::vector<SymmetrySection> sections;
  State initial;
  double horizon = 0.0;
  std::vector<ReferenceLaw> laws;
  // Fiber components with an affine Lagrangian, held at their initial value.
  std::vector<Index> frozen_fiber;
  // Fiber components covered by residual checks (all when empty).
  std::vector<Index> checked_components;
  // Exponential rate of E(t) when it has a closed form (E(t) = E(0)e^{rate t}).
  double energy_rate = 0.0;

  // rk4 at `step` with this scenario's frozen components.
  IntegratorConfig default_config(double step = 1e-3) const;
};

struct RayleighParams {
  Index n = 1;
  double gamma = 0.1;
  double stiffness = 1.0;  // V = ½ k |x|²
  double mass = 1.0;       // g = m·Id
  Vector x0 = Vector::Ones(1);
  Vector y0 = Vector::Zero(1);
  double z0 = 0.0;
  double horizon = 10.0;
};

struct RigidBodyParams {
  Vector inertia = (Vector(3) << 1.0, 1.0, 3.0).finished();  // diagonal
  double gamma = 0.05;
  Vector xi0 = (Vector(3) << 0.5, 0.0, 0.2).finished();
  double z0 = 0.0;
  double horizon = 10.0;
};

struct WongParams {
  Index n = 2;
  // "u1" (abelian, d = 1) or "su2" (d = 3, c = ε).
  std::string group = "u1";
  double field = 1.0;  // 𝓐 = ½ field (−q₂, q₁) per internal direction
  double kappa = 1.0;
  double gamma = 0.2;
  Vector q0 = (Vector(2) << 1.0, 0.0).finished();
  Vector qdot0 = (Vector(2) << 0.0, 1.0).finished();
  Vector v0 = Vector::Constant(1, 0.5);
  double z0 = 0.0;
  double horizon = 5.0;
};

struct MagneticParams {
  double mass = 1.0;
  double charge = 1.0;
  double field = 1.0;  // constant 𝓑₁₂ on flat ℝ²
  double stiffness = 0.0;
  double gamma = 0.1;
  Vector x0 = (Vector(2) << 1.0, 0.0).finished();
  Vector xdot0 = (Vector(2) << 0.0, 1.0).finished();
  double z0 = 0.0;
  double horizon = 10.0;
};

struct ThermoviscousParams {
  Vector inertia = (Vector(3) << 1.0, 1.0, 3.0).finished();
  double t0 = 1.0;
  double gamma = 0.5;
  Vector xi0 = (Vector(3) << 0.5, 0.3, 0.2).finished();
  double s0 = 0.0;
  double horizon = 5.0;
};

struct HamelParams {
  // Frame rotation angle θ(q) = twist·q₁; twist = 0 is the identity frame.
  double twist = 1.0;
  double gamma = 0.1;
  Vector stiffness = (Vector(2) << 1.0, 2.0).finished();  // V = ½ Σ kᵢ qᵢ²
  Vector q0 = (Vector(2) << 1.0, 0.5).finished();
  Vector qdot0 = (Vector(2) << 0.0, 0.3).finished();
  double z0 = 0.0;
  double horizon = 5.0;
};

Scenario rayleigh_scenario(const RayleighParams& p = {});
Scenario rigid_body_scenario(const RigidBodyParams& p = {});
Scenario wong_scenario(const WongParams& p = {});
Scenario magnetic_scenario(const MagneticParams& p = {});
Scenario thermoviscous_scenario(const ThermoviscousParams& p = {});
Scenario hamel_scenario(const HamelParams& p = {});

// Same dynamics in coordinate velocities: the classical system on TQ.
Scenario hamel_coordinate_scenario(const HamelParams& p = {});

// Frame matrix a(q) with y = a(q) q̇.
Matrix hamel_frame(const HamelParams& p, const Vector& q);

// Maps quasi-velocities back to q̇ = a(q)⁻¹ y sample by sample.
Trajectory hamel_to_coordinates(const HamelParams& p, const Trajectory& t);

struct ReductionReport {
  double max_deviation = 0.0;
  double base_deviation = 0.0;      // q and q̇
  double internal_deviation = 0.0;  // v vs θ̇ + 𝓐 q̇
  double z_deviation = 0.0;
};

/// Integrates the reduced Atiyah system and the unreduced system on
/// T(M × S¹) with L = ½(κ(θ̇ + 𝓐·q̇)² + |q̇|²) − γz, and compares the reduced
/// trajectory to the reconstruction (q, q̇, θ̇ + 𝓐·q̇, z). Abelian only.
ReductionReport reduction_crosscheck(const WongParams& p,
                                     const IntegratorConfig& config);

struct ScenarioInfo {
  std::string name;
  std::string description;
};
std::vector<ScenarioInfo> available_scenarios();

}  // namespace herglotz
