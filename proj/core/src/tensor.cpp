#include "herglotz/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"

namespace herglotz {

Tensor3::Tensor3(Index d0, Index d1, Index d2, double fill)
    : d0_(d0), d1_(d1), d2_(d2) {
  if (d0 < 0 || d1 < 0 || d2 < 0) {
    throw ArgumentError("Tensor3: negative dimension");
  }
  data_.assign(static_cast<std::size_t>(d0 * d1 * d2), fill);
}

double Tensor3::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor3 Tensor3::antisymmetrized() const {
  if (d1_ != d2_) {
    throw ArgumentError("Tensor3::antisymmetrized: last two dims differ");
  }
  Tensor3 out(d0_, d1_, d2_);
  for (Index i = 0; i < d0_; ++i) {
    for (Index j = 0; j < d1_; ++j) {
      for (Index k = 0; k < d2_; ++k) {
        out(i, j, k) = 0.5 * ((*this)(i, j, k) - (*this)(i, k, j));
      }
    }
  }
  return out;
}

Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) {
  if (!lhs.same_shape(rhs)) throw ArgumentError("Tensor3: shape mismatch");
  for (std::size_t n = 0; n < lhs.data_.size(); ++n) lhs.data_[n] += rhs.data_[n];
  return lhs;
}

Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) {
  if (!lhs.same_shape(rhs)) throw ArgumentError("Tensor3: shape mismatch");
  for (std::size_t n = 0; n < lhs.data_.size(); ++n) lhs.data_[n] -= rhs.data_[n];
  return lhs;
}

Tensor3 operator*(double s, Tensor3 t) {
  for (double& v : t.data_) v *= s;
  return t;
}

Tensor3 levi_civita() {
  Tensor3 eps(3, 3, 3);
  eps(2, 0, 1) = 1.0;
  eps(2, 1, 0) = -1.0;
  eps(0, 1, 2) = 1.0;
  eps(0, 2, 1) = -1.0;
  eps(1, 2, 0) = 1.0;
  eps(1, 0, 2) = -1.0;
  return eps;
}

}  // namespace herglotz
