#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "herglotz/algebroid.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

/// Point of E × ℝ plus the accumulated log integrating factor
/// ell(t) = ∫₀ᵗ ∂L/∂z, so that λ(t) = exp(−ell(t)).
struct State {
  Vector x;
  Vector y;
  double z = 0.0;
  double ell = 0.0;
};

struct StateRate {
  Vector xdot;
  Vector ydot;
  double zdot = 0.0;
  double elldot = 0.0;
};

enum class Method { rk4, rk45_adaptive };

struct IntegratorConfig {
  Method method = Method::rk4;
  double step = 1e-3;  // rk4 step; output spacing for rk45_adaptive
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_steps = 50'000'000;
  // Fiber components held constant (L affine in them). The Hessian block of
  // the remaining components must be regular.
  std::vector<Index> frozen_fiber;
  double condition_ceiling = HerglotzLagrangian::kDefaultConditionCeiling;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double step_size = 0.0;
  std::string scenario_label;

  std::size_t size() const noexcept { return states.size(); }
  // True when all spacings equal step_size to 1e−9 relative.
  bool is_uniform() const noexcept;
};

/// Right-hand side of the Euler–Lagrange–Herglotz system:
/// ẋ = ρ(x)y, ż = L, ell̇ = ∂L/∂z, and ẏ from
///   W ẏ = ρᵀ ∂L/∂x − C(·,·,y)ᵀ ∂L/∂y + (∂L/∂z) ∂L/∂y − W_yx ẋ − W_yz ż
/// with W the y-Hessian (the chain-rule expansion of d/dt ∂L/∂y).
///
/// Throws RegularityError when W (restricted to the non-frozen components)
/// exceeds the condition ceiling.
StateRate elh_rhs(const AlgebroidChart& chart, const HerglotzLagrangian& lagrangian,
                  const State& state, const IntegratorConfig& config = {});

/// Integrates on [0, horizon] starting from `initial` (whose ell must be 0).
///
/// rk4 samples t_k = k·step and appends one shorter final step when the
/// horizon is not a multiple of step. rk45_adaptive (Dormand–Prince 5(4))
/// controls the local error internally and reports states on the same grid.
Trajectory integrate(const AlgebroidChart& chart,
                     const HerglotzLagrangian& lagrangian, const State& initial,
                     double horizon, const IntegratorConfig& config,
                     std::string label = {});

/// Per-interior-sample covector
///   d/dt(∂L/∂y^α) + C^γ_{αβ} y^β ∂L/∂y^γ − ρ^i_α ∂L/∂x^i − (∂L/∂z)(∂L/∂y^α)
/// with the time derivative by central differences. Entry k − 1 belongs to
/// sample k.
std::vector<Vector> elh_residual_covectors(const AlgebroidChart& chart,
                                           const HerglotzLagrangian& lagrangian,
                                           const Trajectory& trajectory);

/// Max-abs of `elh_residual_covectors` over the listed fiber components
/// (all when empty).
double elh_residual(const AlgebroidChart& chart,
                    const HerglotzLagrangian& lagrangian,
                    const Trajectory& trajectory,
                    std::span<const Index> components = {});

// Throws ArgumentError unless the trajectory is uniform with >= 3 samples.
void require_uniform(const Trajectory& trajectory, const char* who);

// Max-abs over `components` (all when empty) of a list of covectors.
double max_abs_over(const std::vector<Vector>& covectors,
                    std::span<const Index> components);

}  // namespace herglotz
