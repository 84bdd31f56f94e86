#pragma once

#include <functional>
#include <span>

#include "herglotz/tensor.hpp"

namespace herglotz::fd {

// Central difference of a scalar function of one variable.
inline double central(const std::function<double(double)>& f, double at,
                      double step) {
  return (f(at + step) - f(at - step)) / (2.0 * step);
}

// Gradient of f: ℝᵐ → ℝ by central differences.
Vector gradient(const std::function<double(const Vector&)>& f,
                const Vector& at, double step);

// Jacobian of f: ℝᵐ → ℝᵏ by central differences (k × m).
Matrix jacobian(const std::function<Vector(const Vector&)>& f,
                const Vector& at, double step);

// Central time derivative of a uniformly sampled vector series at interior
// sample k (1 ≤ k ≤ size − 2).
Vector time_derivative(std::span<const Vector> series, std::size_t k,
                       double step);
double time_derivative(std::span<const double> series, std::size_t k,
                       double step);

}  // namespace herglotz::fd
