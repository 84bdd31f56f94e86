#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "herglotz/algebroid.hpp"
#include "herglotz/dynamics.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

/// Section σ^α(x) of E. Sections are z-independent; `d_sigma` is the r×n
/// Jacobian ∂σ^α/∂x^i and falls back to central differences when unset.
struct SymmetrySection {
  std::string label;
  std::function<Vector(const Vector&)> sigma;
  std::function<Matrix(const Vector&)> d_sigma;

  Vector eval(const Vector& x) const;
  Matrix jacobian(const Vector& x, double fd_step = 1e-5) const;
};

SymmetrySection constant_section(std::string label, const Vector& value);

// E = ∂L/∂y·y − L.
double energy(const HerglotzLagrangian& lagrangian, const State& state);

/// Symmetry residual of σ at (x, y, z):
///   |ρ^i_α σ^α ∂L/∂x^i + ρ^i_α y^α ∂_iσ^β ∂L/∂y^β + C^β_{αγ} y^α σ^γ ∂L/∂y^β|
double symmetry_residual(const AlgebroidChart& chart,
                         const HerglotzLagrangian& lagrangian,
                         const SymmetrySection& section, const Vector& x,
                         const Vector& y, double z);

// J_σ = ∂L/∂y^α σ^α.
double noether_momentum(const HerglotzLagrangian& lagrangian,
                        const SymmetrySection& section, const State& state);

// max over interior samples of |Ė_FD − (∂L/∂z) E|.
double energy_balance_residual(const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory);

/// max_t |λ(t)Q(t) − Q(0)| / max(|Q(0)|, floor).
double dissipated_drift(std::span<const double> quantity,
                        std::span<const double> lambda, double floor = 1e-12);

/// max_t |Q(t) − Q(0)e^{rate·t}| / max(|Q(0)|, floor), for closed-form
/// exponential laws.
double exponential_law_deviation(std::span<const double> times,
                                 std::span<const double> quantity, double rate,
                                 double floor = 1e-12);

struct MomentumSeries {
  std::string label;
  std::vector<double> values;
  std::vector<double> rescaled;  // λJ
  double max_symmetry_residual = 0.0;
  // The section passed the symmetry check along the whole trajectory, so
  // λJ is advertised as a dissipated invariant.
  bool validated = false;
  double drift = 0.0;
};

struct InvariantLog {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> lambda;
  std::vector<double> rescaled_energy;  // λE
  std::vector<double> dz;               // ∂L/∂z per sample
  double energy_drift = 0.0;
  std::vector<MomentumSeries> momenta;
};

InvariantLog build_invariant_log(const AlgebroidChart& chart,
                                 const HerglotzLagrangian& lagrangian,
                                 const std::vector<SymmetrySection>& sections,
                                 const Trajectory& trajectory,
                                 double symmetry_tol = 1e-10);

}  // namespace herglotz
