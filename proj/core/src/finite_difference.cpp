#include "herglotz/finite_difference.hpp"

#include "herglotz/errors.hpp"

namespace herglotz::fd {

Vector gradient(const std::function<double(const Vector&)>& f,
                const Vector& at, double step) {
  Vector g(at.size());
  Vector probe = at;
  for (Index j = 0; j < at.size(); ++j) {
    probe[j] = at[j] + step;
    const double fp = f(probe);
    probe[j] = at[j] - step;
    const double fm = f(probe);
    probe[j] = at[j];
    g[j] = (fp - fm) / (2.0 * step);
  }
  return g;
}

Matrix jacobian(const std::function<Vector(const Vector&)>& f,
                const Vector& at, double step) {
  Vector probe = at;
  Matrix jac;
  for (Index j = 0; j < at.size(); ++j) {
    probe[j] = at[j] + step;
    const Vector fp = f(probe);
    probe[j] = at[j] - step;
    const Vector fm = f(probe);
    probe[j] = at[j];
    if (j == 0) jac.resize(fp.size(), at.size());
    jac.col(j) = (fp - fm) / (2.0 * step);
  }
  if (at.size() == 0) jac.resize(f(at).size(), 0);
  return jac;
}

Vector time_derivative(std::span<const Vector> series, std::size_t k,
                       double step) {
  if (k == 0 || k + 1 >= series.size()) {
    throw ArgumentError("time_derivative: sample is not interior");
  }
  return (series[k + 1] - series[k - 1]) / (2.0 * step);
}

double time_derivative(std::span<const double> series, std::size_t k,
                       double step) {
  if (k == 0 || k + 1 >= series.size()) {
    throw ArgumentError("time_derivative: sample is not interior");
  }
  return (series[k + 1] - series[k - 1]) / (2.0 * step);
}

}  // namespace herglotz::fd
