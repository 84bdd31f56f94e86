#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace herglotz {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 array with row-major layout `(i, j, k)`.
///
/// Used for structure functions `C(γ, α, β) = C^γ_{αβ}`, Christoffel data
/// `Γ(γ, i, α) = Γ^γ_{iα}` and anchor derivatives `D(i, j, α) = ∂_j ρ^i_α`.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(Index d0, Index d1, Index d2, double fill = 0.0);

  Index dim0() const noexcept { return d0_; }
  Index dim1() const noexcept { return d1_; }
  Index dim2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(Index i, Index j, Index k) {
    return data_[offset(i, j, k)];
  }
  double operator()(Index i, Index j, Index k) const {
    return data_[offset(i, j, k)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Tensor3& other) const noexcept {
    return d0_ == other.d0_ && d1_ == other.d1_ && d2_ == other.d2_;
  }

  // Largest absolute entry; 0 for an empty tensor.
  double max_abs() const noexcept;

  // Returns T with T(i,j,k) = ½ (self(i,j,k) − self(i,k,j)).
  Tensor3 antisymmetrized() const;

  friend Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs);
  friend Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs);
  friend Tensor3 operator*(double s, Tensor3 t);

 private:
  std::size_t offset(Index i, Index j, Index k) const noexcept {
    return static_cast<std::size_t>((i * d1_ + j) * d2_ + k);
  }

  Index d0_ = 0;
  Index d1_ = 0;
  Index d2_ = 0;
  std::vector<double> data_;
};

// ε_{γαβ} laid out as C(γ, α, β): the so(3) structure constants in the
// basis where [e_1, e_2] = e_3.
Tensor3 levi_civita();

}  // namespace herglotz
