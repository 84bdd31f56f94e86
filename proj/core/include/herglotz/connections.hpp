#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "herglotz/algebroid.hpp"
#include "herglotz/dynamics.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

/// TM-connection on E, ∇_{∂/∂x^i} e_α = Γ^γ_{iα}(x) e_γ, stored as
/// Γ(γ, i, α) with shape r×n×r.
class TMConnection {
 public:
  using ChristoffelFn = std::function<Tensor3(const Vector&)>;

  TMConnection(std::string label, Index base_dim, Index fiber_rank,
               ChristoffelFn gamma);

  // Γ ≡ 0.
  static TMConnection trivial(Index base_dim, Index fiber_rank);
  // Constant Γ with entries i.i.d. uniform in [−1, 1].
  static TMConnection random_constant(Index base_dim, Index fiber_rank,
                                      std::uint64_t seed);

  const std::string& label() const noexcept { return label_; }
  Index base_dim() const noexcept { return n_; }
  Index fiber_rank() const noexcept { return r_; }

  Tensor3 christoffel(const Vector& x) const;

 private:
  std::string label_;
  Index n_;
  Index r_;
  ChristoffelFn gamma_;
};

// Wrong-sign variant of the horizontal correction, kept only so the
// cancellation property can be shown to fail when it is broken.
enum class HorizontalSign { correct, flipped };

struct SplitDifferential {
  Vector hor;  // n
  Vector ver;  // r
  double dz = 0.0;
};

/// dL = dL_hor + dL_ver + (∂L/∂z) dz with
///   hor_i = ∂L/∂x^i − Γ^γ_{iα} y^α ∂L/∂y^γ,  ver_α = ∂L/∂y^α.
SplitDifferential split_dL(const TMConnection& conn, const AlgebroidChart& chart,
                           const HerglotzLagrangian& lagrangian,
                           const State& state,
                           HorizontalSign sign = HorizontalSign::correct);

/// ⟨∇̄*_a p, e_α⟩ = ṗ_α + (C^γ_{αβ} a^β − Γ^γ_{iβ} ρ^i_α a^β) p_γ.
Vector dual_ebar_derivative(const TMConnection& conn,
                            const AlgebroidChart& chart, const Vector& x,
                            const Vector& a, const Vector& p,
                            const Vector& pdot);

/// ∇̄*_a p − ρ*(dL_hor) − (∂L/∂z) p per interior sample (entry k − 1 belongs
/// to sample k), with p = ∂L/∂y and ṗ by central differences.
std::vector<Vector> intrinsic_residual_covectors(
    const TMConnection& conn, const AlgebroidChart& chart,
    const HerglotzLagrangian& lagrangian, const Trajectory& trajectory,
    HorizontalSign sign = HorizontalSign::correct);

double ebar_star_residual(const TMConnection& conn, const AlgebroidChart& chart,
                          const HerglotzLagrangian& lagrangian,
                          const Trajectory& trajectory,
                          std::span<const Index> components = {});

// Max pointwise difference of the two connections' residual covectors.
double connection_independence(const TMConnection& a, const TMConnection& b,
                               const AlgebroidChart& chart,
                               const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory,
                               HorizontalSign sign_b = HorizontalSign::correct);

struct MomentumSample {
  double t = 0.0;
  Vector p;
  Vector pdot;
};

std::vector<MomentumSample> momentum_samples(
    const HerglotzLagrangian& lagrangian, const Trajectory& trajectory);

/// Curves (x, a, v, p, z) on one uniform grid.
struct HphCurves {
  std::vector<double> times;
  double step = 0.0;
  std::vector<Vector> x;
  std::vector<Vector> a;
  std::vector<Vector> v;
  std::vector<Vector> p;
  std::vector<double> z;
};

// a = v = y and p = ∂L/∂y along a trajectory.
HphCurves canonical_hph_curves(const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory);

struct HphResiduals {
  Vector r_admiss;     // ẋ − ρ(x)a
  Vector r_av;         // a − v
  Vector r_legendre;   // p − dL_ver(a, z)
  Vector r_dynamics;   // ∇̄*_a p − ρ*dL_hor(a, z) − (∂L/∂z)(a, z) p
  double r_contact = 0.0;  // ż − L(v, z) − ⟨p, a − v⟩
};

// Residuals at interior sample k.
HphResiduals hph_residuals(const AlgebroidChart& chart,
                           const HerglotzLagrangian& lagrangian,
                           const HphCurves& curves, std::size_t k,
                           const TMConnection* conn = nullptr);

struct HphMaxima {
  double admiss = 0.0;
  double av = 0.0;
  double legendre = 0.0;
  double dynamics = 0.0;
  double contact = 0.0;

  double max() const noexcept;
};

// Maxima over interior samples; `components` restricts the fiber-indexed
// residuals (all when empty).
HphMaxima hph_maxima(const AlgebroidChart& chart,
                     const HerglotzLagrangian& lagrangian,
                     const HphCurves& curves,
                     std::span<const Index> components = {});

}  // namespace herglotz
