#include "herglotz/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {
namespace {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m,
                    const std::string& what) {
  if (!m.allFinite()) throw EvaluationError(what + ": non-finite value");
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw EvaluationError(what + ": non-finite value");
}

void require_spd(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ArgumentError(what + " must be a non-empty square matrix");
  }
  if (!m.isApprox(m.transpose(), 1e-12)) {
    throw ArgumentError(what + " must be symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ArgumentError(what + " must be positive definite");
  }
}

}  // namespace

HerglotzLagrangian::HerglotzLagrangian(std::string label, Index base_dim,
                                       Index fiber_rank, ScalarFn value,
                                       Partials partials, double fd_step)
    : label_(std::move(label)),
      n_(base_dim),
      r_(fiber_rank),
      value_(std::move(value)),
      partials_(std::move(partials)),
      fd_step_(fd_step) {
  if (n_ < 0 || r_ <= 0) {
    throw ArgumentError("HerglotzLagrangian '" + label_ +
                        "': need base_dim >= 0 and fiber_rank > 0");
  }
  if (!value_) throw ArgumentError("HerglotzLagrangian: missing value");
  if (!(fd_step_ > 0.0)) {
    throw ArgumentError("HerglotzLagrangian: fd_step must be positive");
  }
}

bool HerglotzLagrangian::exact_hessian() const noexcept {
  return static_cast<bool>(partials_.d2_yy);
}

double HerglotzLagrangian::block_condition(const Matrix& block) const {
  if (block.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (block + block.transpose()),
                                            Eigen::EigenvaluesOnly);
  const Vector mags = eig.eigenvalues().cwiseAbs();
  const double hi = mags.maxCoeff();
  double lo = mags.minCoeff();
  // a finite-difference Hessian cannot resolve eigenvalues below its noise
  if (!exact_hessian() && lo <= kFdEigenFloor * std::max(1.0, hi)) lo = 0.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

bool HerglotzLagrangian::fully_exact() const noexcept {
  return partials_.d_x && partials_.d_y && partials_.d_z && partials_.d2_yy &&
         partials_.d2_yx && partials_.d2_yz;
}

void HerglotzLagrangian::check_shapes(const Vector& x, const Vector& y) const {
  if (x.size() != n_ || y.size() != r_) {
    std::ostringstream msg;
    msg << "Lagrangian '" << label_ << "': state shape (" << x.size() << ", "
        << y.size() << "), expected (" << n_ << ", " << r_ << ")";
    throw ArgumentError(msg.str());
  }
}

double HerglotzLagrangian::eval(const Vector& x, const Vector& y,
                                double z) const {
  check_shapes(x, y);
  const double v = value_(x, y, z);
  require_finite(v, "Lagrangian '" + label_ + "'");
  return v;
}

Vector HerglotzLagrangian::dy(const Vector& x, const Vector& y,
                              double z) const {
  if (partials_.d_y) return partials_.d_y(x, y, z);
  return fd::gradient([&](const Vector& yy) { return value_(x, yy, z); }, y,
                      fd_step_);
}

Gradient HerglotzLagrangian::gradient(const Vector& x, const Vector& y,
                                      double z) const {
  check_shapes(x, y);
  Gradient g;
  g.dx = partials_.d_x
             ? partials_.d_x(x, y, z)
             : fd::gradient([&](const Vector& xx) { return value_(xx, y, z); },
                            x, fd_step_);
  g.dy = dy(x, y, z);
  g.dz = partials_.d_z ? partials_.d_z(x, y, z)
                       : fd::central([&](double zz) { return value_(x, y, zz); },
                                     z, fd_step_);
  if (g.dx.size() != n_ || g.dy.size() != r_) {
    throw EvaluationError("Lagrangian '" + label_ + "': gradient has wrong shape");
  }
  require_finite(g.dx, "gradient of '" + label_ + "'");
  require_finite(g.dy, "gradient of '" + label_ + "'");
  require_finite(g.dz, "gradient of '" + label_ + "'");
  return g;
}

HessianBlocks HerglotzLagrangian::hessian_blocks(const Vector& x,
                                                 const Vector& y,
                                                 double z) const {
  check_shapes(x, y);
  HessianBlocks h;
  if (partials_.d2_yy) {
    h.yy = partials_.d2_yy(x, y, z);
  } else {
    const Matrix raw = fd::jacobian(
        [&](const Vector& yy) { return dy(x, yy, z); }, y, fd_step_);
    h.yy = 0.5 * (raw + raw.transpose());
  }
  h.yx = partials_.d2_yx
             ? partials_.d2_yx(x, y, z)
             : fd::jacobian([&](const Vector& xx) { return dy(xx, y, z); }, x,
                            fd_step_);
  if (partials_.d2_yz) {
    h.yz = partials_.d2_yz(x, y, z);
  } else {
    h.yz = (dy(x, y, z + fd_step_) - dy(x, y, z - fd_step_)) / (2.0 * fd_step_);
  }
  if (h.yy.rows() != r_ || h.yy.cols() != r_ || h.yx.rows() != r_ ||
      h.yx.cols() != n_ || h.yz.size() != r_) {
    throw EvaluationError("Lagrangian '" + label_ + "': Hessian has wrong shape");
  }
  require_finite(h.yy, "Hessian of '" + label_ + "'");
  require_finite(h.yx, "Hessian of '" + label_ + "'");
  require_finite(h.yz, "Hessian of '" + label_ + "'");
  return h;
}

RegularityInfo HerglotzLagrangian::regularity(const Vector& x, const Vector& y,
                                              double z, double ceiling) const {
  return regularity(x, y, z, {}, ceiling);
}

RegularityInfo HerglotzLagrangian::regularity(const Vector& x, const Vector& y,
                                              double z,
                                              const std::vector<Index>& frozen,
                                              double ceiling) const {
  const Matrix full = hessian_blocks(x, y, z).yy;
  std::vector<Index> active;
  for (Index a = 0; a < r_; ++a) {
    if (std::find(frozen.begin(), frozen.end(), a) == frozen.end()) {
      active.push_back(a);
    }
  }
  RegularityInfo info;
  if (active.empty()) {
    info.hessian_condition = 1.0;
    info.regular = true;
    return info;
  }
  Matrix h(active.size(), active.size());
  for (std::size_t i = 0; i < active.size(); ++i)
    for (std::size_t j = 0; j < active.size(); ++j)
      h(i, j) = full(active[i], active[j]);
  info.hessian_condition = block_condition(h);
  info.regular = info.hessian_condition < ceiling;
  return info;
}

Gradient HerglotzLagrangian::fd_gradient(const Vector& x, const Vector& y,
                                         double z, double step) const {
  check_shapes(x, y);
  Gradient g;
  g.dx = fd::gradient([&](const Vector& xx) { return value_(xx, y, z); }, x,
                      step);
  g.dy = fd::gradient([&](const Vector& yy) { return value_(x, yy, z); }, y,
                      step);
  g.dz = fd::central([&](double zz) { return value_(x, y, zz); }, z, step);
  return g;
}

HessianBlocks HerglotzLagrangian::fd_hessian_blocks(const Vector& x,
                                                    const Vector& y, double z,
                                                    double step) const {
  check_shapes(x, y);
  HessianBlocks h;
  h.yy = fd::jacobian([&](const Vector& yy) { return dy(x, yy, z); }, y, step);
  h.yx = fd::jacobian([&](const Vector& xx) { return dy(xx, y, z); }, x, step);
  h.yz = (dy(x, y, z + step) - dy(x, y, z - step)) / (2.0 * step);
  return h;
}

// ---------------------------------------------------------------------------

MetricField constant_metric(const Matrix& g) {
  require_spd(g, "constant_metric");
  const Index n = g.rows();
  return {n, [g](const Vector&) { return g; },
          [n](const Vector&) { return Tensor3(n, n, n); }};
}

Potential zero_potential(Index n) {
  return {[](const Vector&) { return 0.0; },
          [n](const Vector&) -> Vector { return Vector::Zero(n); }};
}

Potential quadratic_potential(const Matrix& stiffness) {
  if (stiffness.rows() != stiffness.cols()) {
    throw ArgumentError("quadratic_potential: stiffness must be square");
  }
  const Matrix k = 0.5 * (stiffness + stiffness.transpose());
  return {[k](const Vector& x) { return 0.5 * x.dot(k * x); },
          [k](const Vector& x) -> Vector { return k * x; }};
}

namespace {

void require_metric(const MetricField& metric, const std::string& what) {
  if (metric.dim <= 0 || !metric.g || !metric.dg) {
    throw ArgumentError(what + ": incomplete metric field");
  }
  require_spd(metric.g(Vector::Zero(metric.dim)), what + ": metric at origin");
}

void require_potential(const Potential& v, const std::string& what) {
  if (!v.value || !v.gradient) {
    throw ArgumentError(what + ": incomplete potential");
  }
}

// ½ yᵀ ∂_k g y for every k.
Vector metric_gradient_term(const Tensor3& dg, const Vector& y) {
  const Index n = dg.dim0();
  Vector out(n);
  for (Index k = 0; k < n; ++k) {
    double s = 0.0;
    for (Index i = 0; i < dg.dim1(); ++i)
      for (Index j = 0; j < dg.dim2(); ++j) s += y[i] * dg(k, i, j) * y[j];
    out[k] = 0.5 * s;
  }
  return out;
}

// (∂_k g · y)_α as an r×n block.
Matrix metric_mixed_block(const Tensor3& dg, const Vector& y) {
  const Index n = dg.dim0();
  Matrix out = Matrix::Zero(dg.dim1(), n);
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < dg.dim1(); ++i)
      for (Index j = 0; j < dg.dim2(); ++j) out(i, k) += dg(k, i, j) * y[j];
  return out;
}

}  // namespace

HerglotzLagrangian rayleigh(const MetricField& metric, const Potential& v,
                            double gamma) {
  require_metric(metric, "rayleigh");
  require_potential(v, "rayleigh");
  if (!(gamma >= 0.0)) throw ArgumentError("rayleigh: gamma must be >= 0");
  const Index n = metric.dim;

  HerglotzLagrangian::Partials p;
  p.d_x = [metric, v](const Vector& x, const Vector& y, double) -> Vector {
    return metric_gradient_term(metric.dg(x), y) - v.gradient(x);
  };
  p.d_y = [metric](const Vector& x, const Vector& y, double) -> Vector {
    return metric.g(x) * y;
  };
  p.d_z = [gamma](const Vector&, const Vector&, double) { return -gamma; };
  p.d2_yy = [metric](const Vector& x, const Vector&, double) {
    return metric.g(x);
  };
  p.d2_yx = [metric](const Vector& x, const Vector& y, double) {
    return metric_mixed_block(metric.dg(x), y);
  };
  p.d2_yz = [n](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(n);
  };
  return HerglotzLagrangian(
      "rayleigh", n, n,
      [metric, v, gamma](const Vector& x, const Vector& y, double z) {
        return 0.5 * y.dot(metric.g(x) * y) - v.value(x) - gamma * z;
      },
      std::move(p));
}

HerglotzLagrangian rigid_body(const Matrix& inertia, double gamma) {
  require_spd(inertia, "rigid_body: inertia");
  if (!(gamma >= 0.0)) throw ArgumentError("rigid_body: gamma must be >= 0");
  const Index r = inertia.rows();
  HerglotzLagrangian::Partials p;
  p.d_x = [](const Vector&, const Vector&, double) { return Vector(0); };
  p.d_y = [inertia](const Vector&, const Vector& xi, double) -> Vector {
    return inertia * xi;
  };
  p.d_z = [gamma](const Vector&, const Vector&, double) { return -gamma; };
  p.d2_yy = [inertia](const Vector&, const Vector&, double) { return inertia; };
  p.d2_yx = [r](const Vector&, const Vector&, double) { return Matrix(r, 0); };
  p.d2_yz = [r](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(r);
  };
  return HerglotzLagrangian(
      "rigid_body", 0, r,
      [inertia, gamma](const Vector&, const Vector& xi, double z) {
        return 0.5 * xi.dot(inertia * xi) - gamma * z;
      },
      std::move(p));
}

HerglotzLagrangian wong_reduced(const MetricField& metric, const Matrix& kappa,
                                double gamma) {
  require_metric(metric, "wong_reduced");
  require_spd(kappa, "wong_reduced: kappa");
  if (!(gamma >= 0.0)) throw ArgumentError("wong_reduced: gamma must be >= 0");
  const Index n = metric.dim;
  const Index d = kappa.rows();
  const Index r = n + d;

  HerglotzLagrangian::Partials p;
  p.d_x = [metric, n](const Vector& x, const Vector& y, double) -> Vector {
    return metric_gradient_term(metric.dg(x), y.head(n));
  };
  p.d_y = [metric, kappa, n, d, r](const Vector& x, const Vector& y,
                                   double) -> Vector {
    Vector out(r);
    out.head(n) = metric.g(x) * y.head(n);
    out.tail(d) = kappa * y.tail(d);
    return out;
  };
  p.d_z = [gamma](const Vector&, const Vector&, double) { return -gamma; };
  p.d2_yy = [metric, kappa, n, d, r](const Vector& x, const Vector&, double) {
    Matrix h = Matrix::Zero(r, r);
    h.topLeftCorner(n, n) = metric.g(x);
    h.bottomRightCorner(d, d) = kappa;
    return h;
  };
  p.d2_yx = [metric, n, r](const Vector& x, const Vector& y, double) {
    Matrix h = Matrix::Zero(r, n);
    h.topRows(n) = metric_mixed_block(metric.dg(x), y.head(n));
    return h;
  };
  p.d2_yz = [r](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(r);
  };
  return HerglotzLagrangian(
      "wong_reduced", n, r,
      [metric, kappa, n, d, gamma](const Vector& x, const Vector& y, double z) {
        const Vector qd = y.head(n);
        const Vector v = y.tail(d);
        return 0.5 * (v.dot(kappa * v) + qd.dot(metric.g(x) * qd)) - gamma * z;
      },
      std::move(p));
}

HerglotzLagrangian thermoviscous(const Matrix& inertia, double u, double t0,
                                 double gamma) {
  require_spd(inertia, "thermoviscous: inertia");
  if (!(t0 > 0.0)) throw ArgumentError("thermoviscous: T0 must be > 0");
  if (!(gamma >= 0.0)) throw ArgumentError("thermoviscous: gamma must be >= 0");
  const Index r = inertia.rows();
  // ∂ℓ/∂ξ = Iξ + (γ/T₀)ξ
  const Matrix pi = inertia + (gamma / t0) * Matrix::Identity(r, r);
  HerglotzLagrangian::Partials p;
  p.d_x = [](const Vector&, const Vector&, double) { return Vector(0); };
  p.d_y = [pi](const Vector&, const Vector& xi, double) -> Vector {
    return pi * xi;
  };
  p.d_z = [t0](const Vector&, const Vector&, double) { return -t0; };
  p.d2_yy = [pi](const Vector&, const Vector&, double) { return pi; };
  p.d2_yx = [r](const Vector&, const Vector&, double) { return Matrix(r, 0); };
  p.d2_yz = [r](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(r);
  };
  return HerglotzLagrangian(
      "thermoviscous", 0, r,
      [inertia, u, t0, gamma](const Vector&, const Vector& xi, double s) {
        return 0.5 * xi.dot(inertia * xi) - u - t0 * s +
               gamma / (2.0 * t0) * xi.squaredNorm();
      },
      std::move(p));
}

HerglotzLagrangian magnetic(double mass, const MetricField& metric,
                            double charge, const Potential& v, double gamma) {
  require_metric(metric, "magnetic");
  require_potential(v, "magnetic");
  if (!(mass > 0.0)) throw ArgumentError("magnetic: mass must be > 0");
  if (!(gamma >= 0.0)) throw ArgumentError("magnetic: gamma must be >= 0");
  const Index n = metric.dim;
  const Index r = n + 1;

  HerglotzLagrangian::Partials p;
  p.d_x = [metric, v, mass, n](const Vector& x, const Vector& y,
                               double) -> Vector {
    return mass * metric_gradient_term(metric.dg(x), y.head(n)) - v.gradient(x);
  };
  p.d_y = [metric, mass, charge, n, r](const Vector& x, const Vector& y,
                                       double) -> Vector {
    Vector out(r);
    out.head(n) = mass * (metric.g(x) * y.head(n));
    out[n] = charge;
    return out;
  };
  p.d_z = [gamma](const Vector&, const Vector&, double) { return -gamma; };
  p.d2_yy = [metric, mass, n, r](const Vector& x, const Vector&, double) {
    Matrix h = Matrix::Zero(r, r);
    h.topLeftCorner(n, n) = mass * metric.g(x);
    return h;
  };
  p.d2_yx = [metric, mass, n, r](const Vector& x, const Vector& y, double) {
    Matrix h = Matrix::Zero(r, n);
    h.topRows(n) = mass * metric_mixed_block(metric.dg(x), y.head(n));
    return h;
  };
  p.d2_yz = [r](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(r);
  };
  return HerglotzLagrangian(
      "magnetic", n, r,
      [metric, v, mass, charge, n, gamma](const Vector& x, const Vector& y,
                                          double z) {
        const Vector xd = y.head(n);
        return 0.5 * mass * xd.dot(metric.g(x) * xd) + charge * y[n] -
               v.value(x) - gamma * z;
      },
      std::move(p));
}

HerglotzLagrangian custom(std::string label, Index base_dim, Index fiber_rank,
                          HerglotzLagrangian::ScalarFn value,
                          HerglotzLagrangian::Partials partials,
                          double fd_step) {
  return HerglotzLagrangian(std::move(label), base_dim, fiber_rank,
                            std::move(value), std::move(partials), fd_step);
}

}  // namespace herglotz
