#include "herglotz/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {
namespace {

constexpr double kSkewInputTolerance = 1e-12;

void require_finite(const Matrix& m, const std::string& what) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream msg;
        msg << what << ": non-finite entry at (" << i << ", " << j << ")";
        throw EvaluationError(msg.str());
      }
    }
  }
}

void require_finite(const Tensor3& t, const std::string& what) {
  for (Index i = 0; i < t.dim0(); ++i) {
    for (Index j = 0; j < t.dim1(); ++j) {
      for (Index k = 0; k < t.dim2(); ++k) {
        if (!std::isfinite(t(i, j, k))) {
          std::ostringstream msg;
          msg << what << ": non-finite entry at (" << i << ", " << j << ", "
              << k << ")";
          throw EvaluationError(msg.str());
        }
      }
    }
  }
}

void require_skew(const Tensor3& c, const std::string& what) {
  if (c.dim1() != c.dim2()) {
    throw ArgumentError(what + ": structure tensor is not square in its lower indices");
  }
  for (Index g = 0; g < c.dim0(); ++g) {
    for (Index a = 0; a < c.dim1(); ++a) {
      for (Index b = a; b < c.dim2(); ++b) {
        if (std::abs(c(g, a, b) + c(g, b, a)) > kSkewInputTolerance) {
          std::ostringstream msg;
          msg << what << ": structure constants not skew at (" << g << ", "
              << a << ", " << b << ")";
          throw ArgumentError(msg.str());
        }
      }
    }
  }
}

// Keeps the α < β half of `c` and mirrors it, so the result is exactly skew.
Tensor3 skew_from_upper(const Tensor3& c) {
  Tensor3 out(c.dim0(), c.dim1(), c.dim2());
  for (Index g = 0; g < c.dim0(); ++g) {
    for (Index a = 0; a < c.dim1(); ++a) {
      for (Index b = a + 1; b < c.dim2(); ++b) {
        out(g, a, b) = c(g, a, b);
        out(g, b, a) = -c(g, a, b);
      }
    }
  }
  return out;
}

}  // namespace

AlgebroidChart::AlgebroidChart(std::string label, Index base_dim,
                               Index fiber_rank, AnchorFn anchor,
                               StructureFn structure)
    : label_(std::move(label)),
      n_(base_dim),
      r_(fiber_rank),
      anchor_(std::move(anchor)),
      structure_(std::move(structure)) {
  if (n_ < 0 || r_ <= 0) {
    throw ArgumentError("AlgebroidChart '" + label_ +
                        "': need base_dim >= 0 and fiber_rank > 0");
  }
  if (!anchor_ || !structure_) {
    throw ArgumentError("AlgebroidChart '" + label_ + "': missing callback");
  }
}

AlgebroidChart AlgebroidChart::with_anchor_derivative(
    AnchorDerivativeFn d) const {
  AlgebroidChart copy = *this;
  copy.anchor_derivative_ = std::move(d);
  return copy;
}

AlgebroidChart AlgebroidChart::with_structure_derivative(
    StructureDerivativeFn d) const {
  AlgebroidChart copy = *this;
  copy.structure_derivative_ = std::move(d);
  return copy;
}

void AlgebroidChart::check_base_point(const Vector& x) const {
  if (x.size() != n_) {
    std::ostringstream msg;
    msg << "chart '" << label_ << "': base point has size " << x.size()
        << ", expected " << n_;
    throw ArgumentError(msg.str());
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      std::ostringstream msg;
      msg << "chart '" << label_ << "': non-finite base coordinate " << i;
      throw ArgumentError(msg.str());
    }
  }
}

Matrix AlgebroidChart::anchor(const Vector& x) const {
  check_base_point(x);
  Matrix rho = anchor_(x);
  if (rho.rows() != n_ || rho.cols() != r_) {
    throw EvaluationError("chart '" + label_ + "': anchor has wrong shape");
  }
  require_finite(rho, "anchor of '" + label_ + "'");
  return rho;
}

Tensor3 AlgebroidChart::structure(const Vector& x) const {
  check_base_point(x);
  Tensor3 c = structure_(x);
  if (c.dim0() != r_ || c.dim1() != r_ || c.dim2() != r_) {
    throw EvaluationError("chart '" + label_ +
                          "': structure tensor has wrong shape");
  }
  require_finite(c, "structure of '" + label_ + "'");
  return c;
}

Tensor3 AlgebroidChart::anchor_derivative(const Vector& x,
                                          double fd_step) const {
  check_base_point(x);
  if (anchor_derivative_) {
    Tensor3 d = anchor_derivative_(x);
    require_finite(d, "anchor derivative of '" + label_ + "'");
    return d;
  }
  Tensor3 d(n_, n_, r_);
  Vector probe = x;
  for (Index j = 0; j < n_; ++j) {
    probe[j] = x[j] + fd_step;
    const Matrix plus = anchor(probe);
    probe[j] = x[j] - fd_step;
    const Matrix minus = anchor(probe);
    probe[j] = x[j];
    for (Index i = 0; i < n_; ++i) {
      for (Index a = 0; a < r_; ++a) {
        d(i, j, a) = (plus(i, a) - minus(i, a)) / (2.0 * fd_step);
      }
    }
  }
  return d;
}

std::vector<Tensor3> AlgebroidChart::structure_derivative(
    const Vector& x, double fd_step) const {
  check_base_point(x);
  if (structure_derivative_) {
    auto d = structure_derivative_(x);
    if (static_cast<Index>(d.size()) != n_) {
      throw EvaluationError("chart '" + label_ +
                            "': structure derivative has wrong length");
    }
    return d;
  }
  std::vector<Tensor3> d;
  d.reserve(static_cast<std::size_t>(n_));
  Vector probe = x;
  for (Index j = 0; j < n_; ++j) {
    probe[j] = x[j] + fd_step;
    const Tensor3 plus = structure(probe);
    probe[j] = x[j] - fd_step;
    const Tensor3 minus = structure(probe);
    probe[j] = x[j];
    d.push_back((0.5 / fd_step) * (plus - minus));
  }
  return d;
}

ValidationReport validate_identities(const AlgebroidChart& chart,
                                     const std::vector<Vector>& points,
                                     double fd_step, double tol) {
  if (points.empty()) {
    throw ArgumentError("validate_identities: no sample points");
  }
  if (!(fd_step > 0.0)) {
    throw ArgumentError("validate_identities: fd_step must be positive");
  }
  const Index n = chart.base_dim();
  const Index r = chart.fiber_rank();

  ValidationReport report;
  report.sample_points = points;
  report.tolerance = tol;

  for (const Vector& x : points) {
    const Matrix rho = chart.anchor(x);
    const Tensor3 c = chart.structure(x);
    const Tensor3 drho = chart.anchor_derivative(x, fd_step);
    const std::vector<Tensor3> dc = chart.structure_derivative(x, fd_step);

    for (Index g = 0; g < r; ++g) {
      for (Index a = 0; a < r; ++a) {
        for (Index b = 0; b < r; ++b) {
          report.max_skew_residual = std::max(
              report.max_skew_residual, std::abs(c(g, a, b) + c(g, b, a)));
        }
      }
    }

    for (Index a = 0; a < r; ++a) {
      for (Index b = 0; b < r; ++b) {
        for (Index i = 0; i < n; ++i) {
          double res = 0.0;
          for (Index j = 0; j < n; ++j) {
            res += rho(j, a) * drho(i, j, b) - rho(j, b) * drho(i, j, a);
          }
          for (Index g = 0; g < r; ++g) res -= rho(i, g) * c(g, a, b);
          report.max_compat_residual =
              std::max(report.max_compat_residual, std::abs(res));
        }
      }
    }

    // term(ν, α, β, γ) = ρ^i_α ∂_i C^ν_{βγ} + C^ν_{αμ} C^μ_{βγ}
    auto term = [&](Index nu, Index a, Index b, Index g) {
      double t = 0.0;
      for (Index i = 0; i < n; ++i) t += rho(i, a) * dc[i](nu, b, g);
      for (Index m = 0; m < r; ++m) t += c(nu, a, m) * c(m, b, g);
      return t;
    };
    for (Index nu = 0; nu < r; ++nu) {
      for (Index a = 0; a < r; ++a) {
        for (Index b = 0; b < r; ++b) {
          for (Index g = 0; g < r; ++g) {
            const double cyc =
                term(nu, a, b, g) + term(nu, b, g, a) + term(nu, g, a, b);
            report.max_jacobi_residual =
                std::max(report.max_jacobi_residual, std::abs(cyc));
          }
        }
      }
    }
  }

  report.passed = report.max_skew_residual <= tol &&
                  report.max_compat_residual <= tol &&
                  report.max_jacobi_residual <= tol;
  return report;
}

std::vector<Vector> default_sample_points(Index base_dim, std::size_t count,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vector> points(count, Vector(base_dim));
  for (Vector& p : points) {
    for (Index i = 0; i < base_dim; ++i) p[i] = unit(rng);
  }
  return points;
}

Vector admissibility_residual(const AlgebroidChart& chart, const Vector& x,
                              const Vector& xdot, const Vector& y) {
  if (xdot.size() != chart.base_dim() || y.size() != chart.fiber_rank()) {
    throw ArgumentError("admissibility_residual: dimension mismatch");
  }
  return xdot - chart.anchor(x) * y;
}

// ---------------------------------------------------------------------------

AlgebroidChart tangent_bundle(Index n) {
  if (n <= 0) throw ArgumentError("tangent_bundle: n must be positive");
  AlgebroidChart chart(
      "tangent_bundle", n, n,
      [n](const Vector&) -> Matrix { return Matrix::Identity(n, n); },
      [n](const Vector&) { return Tensor3(n, n, n); });
  return chart
      .with_anchor_derivative([n](const Vector&) { return Tensor3(n, n, n); })
      .with_structure_derivative([n](const Vector&) {
        return std::vector<Tensor3>(static_cast<std::size_t>(n),
                                    Tensor3(n, n, n));
      });
}

AlgebroidChart lie_algebra(const Tensor3& c, std::string label) {
  const Index r = c.dim0();
  if (r <= 0 || c.dim1() != r || c.dim2() != r) {
    throw ArgumentError("lie_algebra: structure constants must be r×r×r");
  }
  require_skew(c, "lie_algebra");
  Tensor3 skew = skew_from_upper(c);
  return AlgebroidChart(
      std::move(label), 0, r,
      [r](const Vector&) { return Matrix(0, r); },
      [skew](const Vector&) { return skew; });
}

AlgebroidChart so3() { return lie_algebra(levi_civita(), "so3"); }

AlgebroidChart action_algebroid(Index n, AlgebroidChart::AnchorFn generators,
                                const Tensor3& c, std::string label) {
  const Index r = c.dim0();
  if (n <= 0) throw ArgumentError("action_algebroid: n must be positive");
  if (r <= 0 || c.dim1() != r || c.dim2() != r) {
    throw ArgumentError("action_algebroid: structure constants must be r×r×r");
  }
  require_skew(c, "action_algebroid");
  Tensor3 skew = skew_from_upper(c);
  return AlgebroidChart(std::move(label), n, r, std::move(generators),
                        [skew](const Vector&) { return skew; })
      .with_structure_derivative([n, r](const Vector&) {
        return std::vector<Tensor3>(static_cast<std::size_t>(n),
                                    Tensor3(r, r, r));
      });
}

AlgebroidChart so3_action_on_r3() {
  auto generators = [](const Vector& x) -> Matrix {
    const Eigen::Vector3d p = x.head<3>();
    Matrix rho(3, 3);
    for (int a = 0; a < 3; ++a) {
      rho.col(a) = p.cross(Eigen::Vector3d::Unit(a));
    }
    return rho;
  };
  // ∂_j (x × e_α)^i = ε_{i j α}
  auto exact = [](const Vector&) {
    Tensor3 d(3, 3, 3);
    const Tensor3 eps = levi_civita();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a) d(i, j, a) = eps(i, j, a);
    return d;
  };
  return action_algebroid(3, generators, levi_civita(), "so3_action_r3")
      .with_anchor_derivative(exact);
}

AlgebroidChart atiyah_chart(Index n, Index d,
                            std::function<Matrix(const Vector&)> connection,
                            std::function<Tensor3(const Vector&)> curvature,
                            const Tensor3& c, std::string label) {
  if (n <= 0 || d <= 0) {
    throw ArgumentError("atiyah_chart: n and d must be positive");
  }
  if (c.dim0() != d || c.dim1() != d || c.dim2() != d) {
    throw ArgumentError("atiyah_chart: structure constants must be d×d×d");
  }
  require_skew(c, "atiyah_chart");
  if (!connection || !curvature) {
    throw ArgumentError("atiyah_chart: missing connection or curvature");
  }
  const Index r = n + d;
  Tensor3 cg = skew_from_upper(c);

  auto anchor = [n, r](const Vector&) -> Matrix {
    Matrix rho = Matrix::Zero(n, r);
    rho.leftCols(n).setIdentity();
    return rho;
  };
  auto structure = [n, d, r, cg, connection, curvature](const Vector& x) {
    const Matrix a = connection(x);
    const Tensor3 b = curvature(x);
    if (a.rows() != d || a.cols() != n) {
      throw EvaluationError("atiyah_chart: connection must be d×n");
    }
    if (b.dim0() != d || b.dim1() != n || b.dim2() != n) {
      throw EvaluationError("atiyah_chart: curvature must be d×n×n");
    }
    Tensor3 out(r, r, r);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        for (Index A = 0; A < d; ++A) {
          const double bij = 0.5 * (b(A, i, j) - b(A, j, i));
          out(n + A, i, j) = -bij;
          out(n + A, j, i) = bij;
        }
      }
    }
    for (Index i = 0; i < n; ++i) {
      for (Index A = 0; A < d; ++A) {
        for (Index C = 0; C < d; ++C) {
          double v = 0.0;
          for (Index B = 0; B < d; ++B) v += cg(C, A, B) * a(B, i);
          out(n + C, i, n + A) = v;
          out(n + C, n + A, i) = -v;
        }
      }
    }
    for (Index A = 0; A < d; ++A)
      for (Index B = 0; B < d; ++B)
        for (Index C = 0; C < d; ++C) out(n + C, n + A, n + B) = cg(C, A, B);
    return out;
  };
  return AlgebroidChart(std::move(label), n, r, anchor, structure)
      .with_anchor_derivative([n, r](const Vector&) { return Tensor3(n, n, r); });
}

std::function<Tensor3(const Vector&)> curvature_from_connection(
    Index n, Index d, std::function<Matrix(const Vector&)> connection,
    const Tensor3& c, double fd_step) {
  if (c.dim0() != d || c.dim1() != d || c.dim2() != d) {
    throw ArgumentError(
        "curvature_from_connection: structure constants must be d×d×d");
  }
  return [n, d, connection = std::move(connection), c, fd_step](
             const Vector& x) {
    // da[j](A, i) = ∂_j 𝓐^A_i
    std::vector<Matrix> da;
    Vector probe = x;
    for (Index j = 0; j < n; ++j) {
      probe[j] = x[j] + fd_step;
      const Matrix plus = connection(probe);
      probe[j] = x[j] - fd_step;
      const Matrix minus = connection(probe);
      probe[j] = x[j];
      da.push_back((plus - minus) / (2.0 * fd_step));
    }
    const Matrix a = connection(x);
    Tensor3 b(d, n, n);
    for (Index D = 0; D < d; ++D) {
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          double v = da[i](D, j) - da[j](D, i);
          for (Index E = 0; E < d; ++E)
            for (Index B = 0; B < d; ++B) v -= c(D, E, B) * a(E, i) * a(B, j);
          b(D, i, j) = v;
        }
      }
    }
    return b;
  };
}

}  // namespace herglotz
