#include "herglotz/connections.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {
namespace {

// Σ_γ (C^γ_{αβ} a^β − Γ^γ_{iβ} ρ^i_α a^β) p_γ. With Γ = 0 this is the same
// sequence of floating-point operations as the bracket term of the local
// residual.
double bracket_term(const Tensor3& c, const Tensor3& gamma, const Matrix& rho,
                    const Vector& a, const Vector& p, Index alpha) {
  const Index r = a.size();
  const Index n = rho.rows();
  double total = 0.0;
  for (Index g = 0; g < r; ++g) {
    double coef = 0.0;
    for (Index b = 0; b < r; ++b) coef += c(g, alpha, b) * a[b];
    double corr = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index b = 0; b < r; ++b) corr += gamma(g, i, b) * rho(i, alpha) * a[b];
    }
    total += (coef - corr) * p[g];
  }
  return total;
}

Vector horizontal(const Tensor3& gamma, const Vector& dx, const Vector& y,
                  const Vector& dy, HorizontalSign sign) {
  const Index n = dx.size();
  const Index r = y.size();
  Vector hor(n);
  for (Index i = 0; i < n; ++i) {
    double corr = 0.0;
    for (Index g = 0; g < r; ++g) {
      for (Index a = 0; a < r; ++a) corr += gamma(g, i, a) * y[a] * dy[g];
    }
    hor[i] = sign == HorizontalSign::correct ? dx[i] - corr : dx[i] + corr;
  }
  return hor;
}

// ∇̄*_a p − ρ*hor − dz·p, component by component.
Vector intrinsic_covector(const Tensor3& c, const Tensor3& gamma,
                          const Matrix& rho, const Vector& a, const Vector& p,
                          const Vector& pdot, const Vector& hor, double dz) {
  const Index r = a.size();
  const Index n = rho.rows();
  Vector res(r);
  for (Index al = 0; al < r; ++al) {
    const double bracket = bracket_term(c, gamma, rho, a, p, al);
    double anchored = 0.0;
    for (Index i = 0; i < n; ++i) anchored += rho(i, al) * hor[i];
    res[al] = pdot[al] + bracket - anchored - dz * p[al];
  }
  return res;
}

void check_conn(const TMConnection& conn, const AlgebroidChart& chart) {
  if (conn.base_dim() != chart.base_dim() ||
      conn.fiber_rank() != chart.fiber_rank()) {
    throw ArgumentError("connection '" + conn.label() +
                        "' does not match chart '" + chart.label() + "'");
  }
}

}  // namespace

TMConnection::TMConnection(std::string label, Index base_dim, Index fiber_rank,
                           ChristoffelFn gamma)
    : label_(std::move(label)),
      n_(base_dim),
      r_(fiber_rank),
      gamma_(std::move(gamma)) {
  if (n_ < 0 || r_ <= 0) throw ArgumentError("TMConnection: bad dimensions");
  if (!gamma_) throw ArgumentError("TMConnection: missing Christoffel callback");
}

TMConnection TMConnection::trivial(Index base_dim, Index fiber_rank) {
  return TMConnection("trivial", base_dim, fiber_rank,
                      [base_dim, fiber_rank](const Vector&) {
                        return Tensor3(fiber_rank, base_dim, fiber_rank);
                      });
}

TMConnection TMConnection::random_constant(Index base_dim, Index fiber_rank,
                                           std::uint64_t seed) {
  Tensor3 g(fiber_rank, base_dim, fiber_rank);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : g.data()) v = u(rng);
  return TMConnection("random_" + std::to_string(seed), base_dim, fiber_rank,
                      [g](const Vector&) { return g; });
}

Tensor3 TMConnection::christoffel(const Vector& x) const {
  if (x.size() != n_) throw ArgumentError("christoffel: wrong base dimension");
  Tensor3 g = gamma_(x);
  if (g.dim0() != r_ || g.dim1() != n_ || g.dim2() != r_) {
    throw EvaluationError("connection '" + label_ + "' returned a wrong shape");
  }
  for (double v : g.data()) {
    if (!std::isfinite(v)) {
      throw EvaluationError("connection '" + label_ + "' is not finite");
    }
  }
  return g;
}

SplitDifferential split_dL(const TMConnection& conn, const AlgebroidChart& chart,
                           const HerglotzLagrangian& lagrangian,
                           const State& state, HorizontalSign sign) {
  check_conn(conn, chart);
  const Gradient g = lagrangian.gradient(state.x, state.y, state.z);
  SplitDifferential out;
  out.hor = horizontal(conn.christoffel(state.x), g.dx, state.y, g.dy, sign);
  out.ver = g.dy;
  out.dz = g.dz;
  return out;
}

Vector dual_ebar_derivative(const TMConnection& conn,
                            const AlgebroidChart& chart, const Vector& x,
                            const Vector& a, const Vector& p,
                            const Vector& pdot) {
  check_conn(conn, chart);
  const Index r = chart.fiber_rank();
  if (a.size() != r || p.size() != r || pdot.size() != r) {
    throw ArgumentError("dual_ebar_derivative: wrong fiber rank");
  }
  const Matrix rho = chart.anchor(x);
  const Tensor3 c = chart.structure(x);
  const Tensor3 gamma = conn.christoffel(x);
  Vector out(r);
  for (Index al = 0; al < r; ++al) {
    out[al] = pdot[al] + bracket_term(c, gamma, rho, a, p, al);
  }
  return out;
}

std::vector<MomentumSample> momentum_samples(
    const HerglotzLagrangian& lagrangian, const Trajectory& trajectory) {
  require_uniform(trajectory, "momentum_samples");
  std::vector<Vector> p;
  p.reserve(trajectory.size());
  for (const State& s : trajectory.states) {
    p.push_back(lagrangian.gradient(s.x, s.y, s.z).dy);
  }
  std::vector<MomentumSample> out;
  out.reserve(trajectory.size() - 2);
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    out.push_back({trajectory.times[k], p[k],
                   fd::time_derivative(p, k, trajectory.step_size)});
  }
  return out;
}

std::vector<Vector> intrinsic_residual_covectors(
    const TMConnection& conn, const AlgebroidChart& chart,
    const HerglotzLagrangian& lagrangian, const Trajectory& trajectory,
    HorizontalSign sign) {
  check_conn(conn, chart);
  require_uniform(trajectory, "ebar_star_residual");
  std::vector<Gradient> grads;
  std::vector<Vector> momenta;
  grads.reserve(trajectory.size());
  momenta.reserve(trajectory.size());
  for (const State& s : trajectory.states) {
    grads.push_back(lagrangian.gradient(s.x, s.y, s.z));
    momenta.push_back(grads.back().dy);
  }
  std::vector<Vector> out;
  out.reserve(trajectory.size() - 2);
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const State& s = trajectory.states[k];
    const Gradient& g = grads[k];
    const Vector pdot = fd::time_derivative(momenta, k, trajectory.step_size);
    const Tensor3 gamma = conn.christoffel(s.x);
    const Vector hor = horizontal(gamma, g.dx, s.y, g.dy, sign);
    out.push_back(intrinsic_covector(chart.structure(s.x), gamma,
                                     chart.anchor(s.x), s.y, g.dy, pdot, hor,
                                     g.dz));
  }
  return out;
}

double ebar_star_residual(const TMConnection& conn, const AlgebroidChart& chart,
                          const HerglotzLagrangian& lagrangian,
                          const Trajectory& trajectory,
                          std::span<const Index> components) {
  return max_abs_over(
      intrinsic_residual_covectors(conn, chart, lagrangian, trajectory),
      components);
}

double connection_independence(const TMConnection& a, const TMConnection& b,
                               const AlgebroidChart& chart,
                               const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory,
                               HorizontalSign sign_b) {
  const auto ra = intrinsic_residual_covectors(a, chart, lagrangian, trajectory);
  const auto rb =
      intrinsic_residual_covectors(b, chart, lagrangian, trajectory, sign_b);
  double worst = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    if (ra[k].size() > 0) {
      worst = std::max(worst, (ra[k] - rb[k]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

HphCurves canonical_hph_curves(const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory) {
  require_uniform(trajectory, "canonical_hph_curves");
  HphCurves c;
  c.times = trajectory.times;
  c.step = trajectory.step_size;
  for (const State& s : trajectory.states) {
    c.x.push_back(s.x);
    c.a.push_back(s.y);
    c.v.push_back(s.y);
    c.p.push_back(lagrangian.gradient(s.x, s.y, s.z).dy);
    c.z.push_back(s.z);
  }
  return c;
}

HphResiduals hph_residuals(const AlgebroidChart& chart,
                           const HerglotzLagrangian& lagrangian,
                           const HphCurves& curves, std::size_t k,
                           const TMConnection* conn) {
  const std::size_t m = curves.times.size();
  if (curves.x.size() != m || curves.a.size() != m || curves.v.size() != m ||
      curves.p.size() != m || curves.z.size() != m) {
    throw ArgumentError("hph_residuals: curves are not on one grid");
  }
  if (k == 0 || k + 1 >= m) {
    throw ArgumentError("hph_residuals: sample is not interior");
  }
  if (!(curves.step > 0.0)) throw ArgumentError("hph_residuals: bad step");
  const TMConnection trivial =
      TMConnection::trivial(chart.base_dim(), chart.fiber_rank());
  const TMConnection& cn = conn != nullptr ? *conn : trivial;
  check_conn(cn, chart);

  const Vector& x = curves.x[k];
  const Vector& a = curves.a[k];
  const Vector& v = curves.v[k];
  const Vector& p = curves.p[k];
  const double z = curves.z[k];
  const double h = curves.step;

  const Matrix rho = chart.anchor(x);
  const Gradient ga = lagrangian.gradient(x, a, z);
  const Tensor3 gamma = cn.christoffel(x);

  HphResiduals res;
  res.r_admiss = fd::time_derivative(curves.x, k, h) - rho * a;
  res.r_av = a - v;
  res.r_legendre = p - ga.dy;
  const Vector pdot = fd::time_derivative(curves.p, k, h);
  const Vector hor = horizontal(gamma, ga.dx, a, ga.dy, HorizontalSign::correct);
  res.r_dynamics = intrinsic_covector(chart.structure(x), gamma, rho, a, p, pdot,
                                     hor, ga.dz);
  res.r_contact = fd::time_derivative(curves.z, k, h) -
                  lagrangian.eval(x, v, z) - p.dot(a - v);
  return res;
}

double HphMaxima::max() const noexcept {
  return std::max({admiss, av, legendre, dynamics, contact});
}

HphMaxima hph_maxima(const AlgebroidChart& chart,
                     const HerglotzLagrangian& lagrangian,
                     const HphCurves& curves,
                     std::span<const Index> components) {
  HphMaxima out;
  auto fiber_max = [&](const Vector& v) {
    double m = 0.0;
    if (components.empty()) {
      if (v.size() > 0) m = v.cwiseAbs().maxCoeff();
    } else {
      for (Index i : components) m = std::max(m, std::abs(v[i]));
    }
    return m;
  };
  for (std::size_t k = 1; k + 1 < curves.times.size(); ++k) {
    const HphResiduals r = hph_residuals(chart, lagrangian, curves, k);
    if (r.r_admiss.size() > 0) {
      out.admiss = std::max(out.admiss, r.r_admiss.cwiseAbs().maxCoeff());
    }
    out.av = std::max(out.av, fiber_max(r.r_av));
    out.legendre = std::max(out.legendre, fiber_max(r.r_legendre));
    out.dynamics = std::max(out.dynamics, fiber_max(r.r_dynamics));
    out.contact = std::max(out.contact, std::abs(r.r_contact));
  }
  return out;
}

}  // namespace herglotz
