#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "herglotz/tensor.hpp"

namespace herglotz {

/// Local data of a rank-r Lie algebroid over an n-dimensional base.
///
/// A chart is a pair of callbacks: the anchor `ρ(x)` as an n×r matrix with
/// `ρ(x)(i, α) = ρ^i_α(x)`, and the structure functions as an r×r×r tensor
/// with `C(γ, α, β) = C^γ_{αβ}(x)`, so `[e_α, e_β] = C^γ_{αβ} e_γ`.
///
/// Lie algebras are charts with `base_dim() == 0`; every operation accepts
/// empty base vectors.
///
/// Charts are immutable once built and the callbacks must be pure, so a
/// chart may be shared freely between threads.
class AlgebroidChart {
 public:
  using AnchorFn = std::function<Matrix(const Vector&)>;
  using StructureFn = std::function<Tensor3(const Vector&)>;
  // D(i, j, α) = ∂_j ρ^i_α
  using AnchorDerivativeFn = std::function<Tensor3(const Vector&)>;
  // entry j holds ∂_j C as a tensor shaped like C
  using StructureDerivativeFn =
      std::function<std::vector<Tensor3>(const Vector&)>;

  static constexpr double kDefaultFdStep = 1e-5;

  AlgebroidChart(std::string label, Index base_dim, Index fiber_rank,
                 AnchorFn anchor, StructureFn structure);

  // Exact derivative callbacks override finite differences.
  AlgebroidChart with_anchor_derivative(AnchorDerivativeFn d) const;
  AlgebroidChart with_structure_derivative(StructureDerivativeFn d) const;

  const std::string& label() const noexcept { return label_; }
  Index base_dim() const noexcept { return n_; }
  Index fiber_rank() const noexcept { return r_; }

  // Throws ArgumentError on a wrong-sized x and EvaluationError when the
  // callback returns a non-finite entry (the message names the index).
  Matrix anchor(const Vector& x) const;
  Tensor3 structure(const Vector& x) const;

  Tensor3 anchor_derivative(const Vector& x,
                            double fd_step = kDefaultFdStep) const;
  std::vector<Tensor3> structure_derivative(
      const Vector& x, double fd_step = kDefaultFdStep) const;

  bool has_exact_anchor_derivative() const noexcept {
    return static_cast<bool>(anchor_derivative_);
  }
  bool has_exact_structure_derivative() const noexcept {
    return static_cast<bool>(structure_derivative_);
  }

 private:
  void check_base_point(const Vector& x) const;

  std::string label_;
  Index n_;
  Index r_;
  AnchorFn anchor_;
  StructureFn structure_;
  AnchorDerivativeFn anchor_derivative_;
  StructureDerivativeFn structure_derivative_;
};

struct ValidationReport {
  double max_skew_residual = 0.0;
  double max_compat_residual = 0.0;
  double max_jacobi_residual = 0.0;
  std::vector<Vector> sample_points;
  double tolerance = 0.0;
  bool passed = false;
};

/// Samples the skew-symmetry, anchor/bracket compatibility and Jacobi
/// identities of `chart` at `points`.
///
/// Compatibility: ρ^j_α ∂_j ρ^i_β − ρ^j_β ∂_j ρ^i_α − ρ^i_γ C^γ_{αβ}.
/// Jacobi: Σ_cyclic(α,β,γ) ρ^i_α ∂_i C^ν_{βγ} + C^ν_{αμ} C^μ_{βγ}.
/// Derivatives come from the chart's exact callbacks when present and from
/// central differences of step `fd_step` otherwise.
ValidationReport validate_identities(const AlgebroidChart& chart,
                                     const std::vector<Vector>& points,
                                     double fd_step, double tol);

/// `count` points uniform in [−1, 1]ⁿ from a fixed-seed generator.
std::vector<Vector> default_sample_points(Index base_dim,
                                          std::size_t count = 100,
                                          std::uint64_t seed = 42);

/// ẋ − ρ(x)·y.
Vector admissibility_residual(const AlgebroidChart& chart, const Vector& x,
                              const Vector& xdot, const Vector& y);

// ---------------------------------------------------------------------------
// Builders. Each returns a chart whose structure tensor is exactly skew in
// the lower indices.

AlgebroidChart tangent_bundle(Index n);

// Constant structure constants; rejects tensors that are not skew.
AlgebroidChart lie_algebra(const Tensor3& c, std::string label = "lie_algebra");

AlgebroidChart so3();

/// Action algebroid Q × 𝔤 → Q. `generators(x)` is the n×r matrix whose
/// column α is the infinitesimal generator (e_α)_Q at x; `c` are the
/// structure constants of 𝔤. The anchor must be a Lie algebra morphism,
/// which `validate_identities` checks.
AlgebroidChart action_algebroid(Index n, AlgebroidChart::AnchorFn generators,
                                const Tensor3& c,
                                std::string label = "action_algebroid");

// so(3) acting on ℝ³ with generators ρ_α(x) = x × e_α.
AlgebroidChart so3_action_on_r3();

/// Local Atiyah chart in the G-invariant frame {e_i, ê_A}: fiber indices
/// 0..n−1 are the base directions, n..n+d−1 the internal ones.
///
/// `connection(x)` is the d×n matrix 𝓐^A_i, `curvature(x)` the d×n×n tensor
/// 𝓑^A_{ij}, and `c(C, A, B) = c^C_{AB}` the structure constants of 𝔤.
/// Brackets: [e_i, e_j] = −𝓑^A_{ij} ê_A, [e_i, ê_A] = c^C_{AB} 𝓐^B_i ê_C,
/// [ê_A, ê_B] = c^C_{AB} ê_C; anchor ρ(e_i) = ∂/∂q^i, ρ(ê_A) = 0.
AlgebroidChart atiyah_chart(Index n, Index d,
                            std::function<Matrix(const Vector&)> connection,
                            std::function<Tensor3(const Vector&)> curvature,
                            const Tensor3& c,
                            std::string label = "atiyah");

/// Curvature compatible with the bracket table above:
/// 𝓑^D_{ij} = ∂_i 𝓐^D_j − ∂_j 𝓐^D_i − c^D_{EB} 𝓐^E_i 𝓐^B_j, with the
/// derivatives of 𝓐 taken by central differences.
std::function<Tensor3(const Vector&)> curvature_from_connection(
    Index n, Index d, std::function<Matrix(const Vector&)> connection,
    const Tensor3& c, double fd_step = AlgebroidChart::kDefaultFdStep);

}  // namespace herglotz
