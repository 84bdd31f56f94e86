#pragma once

#include <functional>
#include <string>
#include <vector>

#include "herglotz/tensor.hpp"

namespace herglotz {

struct Gradient {
  Vector dx;  // ∂L/∂x^i
  Vector dy;  // ∂L/∂y^α
  double dz = 0.0;
};

// Second derivatives of L involving the fiber slot.
struct HessianBlocks {
  Matrix yy;  // r×r, ∂²L/∂y^α∂y^β
  Matrix yx;  // r×n, ∂²L/∂y^α∂x^i
  Vector yz;  // r,   ∂²L/∂y^α∂z
};

struct RegularityInfo {
  double hessian_condition = 0.0;
  bool regular = false;
};

/// A Herglotz Lagrangian L(x, y, z) on E × ℝ together with the derivative
/// data the Euler–Lagrange–Herglotz dynamics needs.
///
/// Missing first partials fall back to central differences of the value;
/// missing second partials fall back to central differences of `d_y`. The
/// callbacks must be pure. Finite differences assume L is C² near the
/// evaluated states.
class HerglotzLagrangian {
 public:
  using ScalarFn =
      std::function<double(const Vector& x, const Vector& y, double z)>;
  using VectorFn =
      std::function<Vector(const Vector& x, const Vector& y, double z)>;
  using MatrixFn =
      std::function<Matrix(const Vector& x, const Vector& y, double z)>;

  struct Partials {
    VectorFn d_x;
    VectorFn d_y;
    ScalarFn d_z;
    MatrixFn d2_yy;
    MatrixFn d2_yx;
    VectorFn d2_yz;
  };

  static constexpr double kDefaultFdStep = 1e-5;
  static constexpr double kDefaultConditionCeiling = 1e12;
  static constexpr double kFdEigenFloor = 1e-6;

  HerglotzLagrangian(std::string label, Index base_dim, Index fiber_rank,
                     ScalarFn value, Partials partials = {},
                     double fd_step = kDefaultFdStep);

  const std::string& label() const noexcept { return label_; }
  Index base_dim() const noexcept { return n_; }
  Index fiber_rank() const noexcept { return r_; }
  double fd_step() const noexcept { return fd_step_; }
  const Partials& partials() const noexcept { return partials_; }

  // True when every first and second partial is registered.
  bool fully_exact() const noexcept;
  // True when the y-Hessian comes from a registered closed form.
  bool exact_hessian() const noexcept;
  // Eigenvalue condition number of a symmetric block of the y-Hessian;
  // eigenvalues under the finite-difference noise floor count as zero.
  double block_condition(const Matrix& block) const;

  double eval(const Vector& x, const Vector& y, double z) const;
  Gradient gradient(const Vector& x, const Vector& y, double z) const;
  HessianBlocks hessian_blocks(const Vector& x, const Vector& y,
                               double z) const;

  // Condition number of the y-Hessian; the second overload drops the
  // `frozen` fiber components first.
  RegularityInfo regularity(const Vector& x, const Vector& y, double z,
                            double ceiling = kDefaultConditionCeiling) const;
  RegularityInfo regularity(const Vector& x, const Vector& y, double z,
                            const std::vector<Index>& frozen,
                            double ceiling = kDefaultConditionCeiling) const;

  // Finite-difference versions used to cross-check the exact callbacks:
  // first partials from the value, second partials from `d_y`.
  Gradient fd_gradient(const Vector& x, const Vector& y, double z,
                       double step) const;
  HessianBlocks fd_hessian_blocks(const Vector& x, const Vector& y, double z,
                                  double step) const;

 private:
  void check_shapes(const Vector& x, const Vector& y) const;
  Vector dy(const Vector& x, const Vector& y, double z) const;

  std::string label_;
  Index n_;
  Index r_;
  ScalarFn value_;
  Partials partials_;
  double fd_step_;
};

/// Metric field g(x) with its derivative dg(k, i, j) = ∂_k g_ij(x).
struct MetricField {
  Index dim = 0;
  std::function<Matrix(const Vector&)> g;
  std::function<Tensor3(const Vector&)> dg;
};
MetricField constant_metric(const Matrix& g);

/// Potential V(x) with gradient.
struct Potential {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};
Potential zero_potential(Index n);
// V(x) = ½ xᵀ K x
Potential quadratic_potential(const Matrix& stiffness);

// ---------------------------------------------------------------------------
// Built-in Lagrangians. All register exact first and second partials.

// L = ½ g(x)(y, y) − V(x) − γ z on TQ.
HerglotzLagrangian rayleigh(const MetricField& metric, const Potential& v,
                            double gamma);

// ℓ(ξ, z) = ½⟨Iξ, ξ⟩ − γ z on a 3-dimensional Lie algebra.
HerglotzLagrangian rigid_body(const Matrix& inertia, double gamma);

// L = ½(κ_AB v^A v^B + g_ij q̇^i q̇^j) − γ z in the Atiyah frame, y = (q̇, v).
HerglotzLagrangian wong_reduced(const MetricField& metric, const Matrix& kappa,
                                double gamma);

// L = ½⟨Iξ, ξ⟩ − U − T₀ S + (γ / 2T₀)‖ξ‖², z = S, U a left-invariant constant.
HerglotzLagrangian thermoviscous(const Matrix& inertia, double u, double t0,
                                 double gamma);

// L = (m/2) g(ẋ, ẋ) + e u − V(x) − γ z on TM ⊕ ℝ, y = (ẋ, u).
HerglotzLagrangian magnetic(double mass, const MetricField& metric,
                            double charge, const Potential& v, double gamma);

HerglotzLagrangian custom(std::string label, Index base_dim, Index fiber_rank,
                          HerglotzLagrangian::ScalarFn value,
                          HerglotzLagrangian::Partials partials = {},
                          double fd_step = HerglotzLagrangian::kDefaultFdStep);

}  // namespace herglotz
