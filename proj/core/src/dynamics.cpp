#include "herglotz/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Packed layout [x, y, z, ell] used by the Runge–Kutta stages.
Vector pack(const State& s) {
  const Index n = s.x.size();
  const Index r = s.y.size();
  Vector v(n + r + 2);
  v.head(n) = s.x;
  v.segment(n, r) = s.y;
  v[n + r] = s.z;
  v[n + r + 1] = s.ell;
  return v;
}

State unpack(const Vector& v, Index n, Index r) {
  State s;
  s.x = v.head(n);
  s.y = v.segment(n, r);
  s.z = v[n + r];
  s.ell = v[n + r + 1];
  return s;
}

Vector pack(const StateRate& d) {
  const Index n = d.xdot.size();
  const Index r = d.ydot.size();
  Vector v(n + r + 2);
  v.head(n) = d.xdot;
  v.segment(n, r) = d.ydot;
  v[n + r] = d.zdot;
  v[n + r + 1] = d.elldot;
  return v;
}

class PackedSystem {
 public:
  PackedSystem(const AlgebroidChart& chart, const HerglotzLagrangian& lagrangian,
               const IntegratorConfig& config)
      : chart_(chart),
        lagrangian_(lagrangian),
        config_(config),
        n_(chart.base_dim()),
        r_(chart.fiber_rank()) {}

  Vector operator()(const Vector& v) const {
    return pack(elh_rhs(chart_, lagrangian_, unpack(v, n_, r_), config_));
  }

  Index n() const { return n_; }
  Index r() const { return r_; }

 private:
  const AlgebroidChart& chart_;
  const HerglotzLagrangian& lagrangian_;
  const IntegratorConfig& config_;
  Index n_;
  Index r_;
};

Vector rk4_step(const PackedSystem& f, const Vector& v, double h) {
  const Vector k1 = f(v);
  const Vector k2 = f(v + 0.5 * h * k1);
  const Vector k3 = f(v + 0.5 * h * k2);
  const Vector k4 = f(v + h * k3);
  return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand–Prince 5(4) tableau.
struct DoPri {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b − b̂ (fifth minus fourth order weights)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct DoPriResult {
  Vector next;
  Vector k_last;  // f(next), reused as k1 of the following step (FSAL)
  double error_norm;
};

DoPriResult dopri_step(const PackedSystem& f, const Vector& v, const Vector& k1,
                       double h, double rel_tol, double abs_tol) {
  using T = DoPri;
  const Vector k2 = f(v + h * (T::a21 * k1));
  const Vector k3 = f(v + h * (T::a31 * k1 + T::a32 * k2));
  const Vector k4 = f(v + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
  const Vector k5 =
      f(v + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
  const Vector k6 = f(v + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                               T::a64 * k4 + T::a65 * k5));
  Vector next = v + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 +
                         T::b6 * k6);
  Vector k7 = f(next);
  const Vector err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 +
                          T::e6 * k6 + T::e7 * k7);
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(v[i]), std::abs(next[i]));
    sum += (err[i] / scale) * (err[i] / scale);
  }
  const double norm = v.size() > 0 ? std::sqrt(sum / static_cast<double>(v.size())) : 0.0;
  return {std::move(next), std::move(k7), norm};
}

// Output grid 0, h, 2h, …, plus the horizon when it is not on the grid.
std::vector<double> output_grid(double horizon, double step) {
  const double ratio = horizon / step;
  auto full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  std::vector<double> times;
  times.reserve(full + 2);
  for (std::size_t k = 0; k <= full; ++k) {
    times.push_back(static_cast<double>(k) * step);
  }
  if (horizon - times.back() > 1e-12 * std::max(1.0, horizon)) {
    times.push_back(horizon);
  } else {
    times.back() = std::min(times.back(), horizon);
  }
  return times;
}

void require_finite_state(const Vector& v, double t) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "integration produced a non-finite state at t = " << t;
    throw NumericError(msg.str());
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ArgumentError("IntegratorConfig: step must be > 0");
  }
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ArgumentError("IntegratorConfig: tolerances must be > 0");
  }
  if (max_steps == 0) throw ArgumentError("IntegratorConfig: max_steps is 0");
  for (const Index a : frozen_fiber) {
    if (a < 0) throw ArgumentError("IntegratorConfig: negative frozen fiber index");
  }
}

bool Trajectory::is_uniform() const noexcept {
  if (times.size() < 2 || !(step_size > 0.0)) return false;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - step_size) > 1e-9 * step_size) {
      return false;
    }
  }
  return true;
}

StateRate elh_rhs(const AlgebroidChart& chart, const HerglotzLagrangian& lagrangian,
                  const State& state, const IntegratorConfig& config) {
  const Index n = chart.base_dim();
  const Index r = chart.fiber_rank();
  if (lagrangian.base_dim() != n || lagrangian.fiber_rank() != r) {
    throw ArgumentError("elh_rhs: chart and Lagrangian dimensions differ");
  }
  if (state.x.size() != n || state.y.size() != r) {
    throw ArgumentError("elh_rhs: state has wrong shape");
  }
  const Matrix rho = chart.anchor(state.x);
  const Tensor3 c = chart.structure(state.x);
  const Gradient grad = lagrangian.gradient(state.x, state.y, state.z);
  const HessianBlocks hess = lagrangian.hessian_blocks(state.x, state.y, state.z);

  StateRate rate;
  rate.xdot = rho * state.y;
  rate.zdot = lagrangian.eval(state.x, state.y, state.z);
  rate.elldot = grad.dz;

  Vector force = rho.transpose() * grad.dx + grad.dz * grad.dy -
                 hess.yx * rate.xdot - hess.yz * rate.zdot;
  for (Index a = 0; a < r; ++a) {
    double bracket = 0.0;
    for (Index g = 0; g < r; ++g) {
      double cy = 0.0;
      for (Index b = 0; b < r; ++b) cy += c(g, a, b) * state.y[b];
      bracket += cy * grad.dy[g];
    }
    force[a] -= bracket;
  }

  std::vector<Index> active;
  active.reserve(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a) {
    if (std::find(config.frozen_fiber.begin(), config.frozen_fiber.end(), a) ==
        config.frozen_fiber.end()) {
      active.push_back(a);
    }
  }
  rate.ydot = Vector::Zero(r);
  if (active.empty()) return rate;

  const auto m = static_cast<Index>(active.size());
  Matrix w(m, m);
  Vector rhs(m);
  for (Index i = 0; i < m; ++i) {
    rhs[i] = force[active[i]];
    for (Index j = 0; j < m; ++j) w(i, j) = hess.yy(active[i], active[j]);
  }

  const double cond = lagrangian.block_condition(w);
  if (!(cond < config.condition_ceiling)) {
    std::ostringstream msg;
    msg << "Lagrangian '" << lagrangian.label()
        << "' is not regular: y-Hessian condition number " << cond;
    throw RegularityError(msg.str(), kNaN);
  }

  const Vector acc = w.partialPivLu().solve(rhs);
  if (!acc.allFinite()) {
    throw NumericError("elh_rhs: linear solve for the fiber acceleration failed");
  }
  for (Index i = 0; i < m; ++i) rate.ydot[active[i]] = acc[i];
  return rate;
}

Trajectory integrate(const AlgebroidChart& chart,
                     const HerglotzLagrangian& lagrangian, const State& initial,
                     double horizon, const IntegratorConfig& config,
                     std::string label) {
  config.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ArgumentError("integrate: horizon must be > 0");
  }
  if (initial.ell != 0.0) {
    throw ArgumentError("integrate: initial ell must be 0");
  }
  const PackedSystem system(chart, lagrangian, config);
  if (initial.x.size() != system.n() || initial.y.size() != system.r()) {
    throw ArgumentError("integrate: initial state has wrong shape");
  }
  for (const Index a : config.frozen_fiber) {
    if (a >= system.r()) {
      throw ArgumentError("integrate: frozen fiber index out of range");
    }
  }
  Vector v = pack(initial);
  require_finite_state(v, 0.0);

  Trajectory traj;
  traj.times = output_grid(horizon, config.step);
  traj.step_size = config.step;
  traj.scenario_label = std::move(label);
  traj.states.reserve(traj.times.size());
  traj.states.push_back(initial);

  double t = 0.0;
  std::size_t steps = 0;
  auto guarded = [&](auto&& body) {
    try {
      body();
    } catch (const RegularityError& e) {
      std::ostringstream msg;
      msg << e.what() << " (at t = " << t << ")";
      throw RegularityError(msg.str(), t);
    }
  };

  if (config.method == Method::rk4) {
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      if (++steps > config.max_steps) {
        throw NumericError("integrate: max_steps exceeded");
      }
      const double h = traj.times[k] - traj.times[k - 1];
      guarded([&] { v = rk4_step(system, v, h); });
      t = traj.times[k];
      require_finite_state(v, t);
      traj.states.push_back(unpack(v, system.n(), system.r()));
    }
    return traj;
  }

  // Adaptive: never step across an output time.
  Vector k1;
  guarded([&] { k1 = system(v); });
  double h = config.step;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double target = traj.times[k];
    while (t < target) {
      if (++steps > config.max_steps) {
        throw NumericError("integrate: max_steps exceeded");
      }
      const double remaining = target - t;
      const bool lands = h >= remaining * (1.0 - 1e-12);
      const double trial = lands ? remaining : h;
      DoPriResult res;
      guarded([&] {
        res = dopri_step(system, v, k1, trial, config.rel_tol, config.abs_tol);
      });
      const double factor =
          res.error_norm > 0.0
              ? std::clamp(0.9 * std::pow(res.error_norm, -0.2), 0.2, 5.0)
              : 5.0;
      if (res.error_norm <= 1.0) {
        t = lands ? target : t + trial;
        v = std::move(res.next);
        k1 = std::move(res.k_last);
        require_finite_state(v, t);
        if (!lands) h = trial * factor;
        else h = std::max(h, trial * factor);
      } else {
        h = trial * factor;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          std::ostringstream msg;
          msg << "integrate: step size underflow at t = " << t;
          throw NumericError(msg.str());
        }
      }
    }
    traj.states.push_back(unpack(v, system.n(), system.r()));
  }
  return traj;
}

void require_uniform(const Trajectory& trajectory, const char* who) {
  if (trajectory.size() < 3 || trajectory.times.size() != trajectory.size()) {
    throw ArgumentError(std::string(who) + ": need at least 3 samples");
  }
  if (!trajectory.is_uniform()) {
    throw ArgumentError(std::string(who) + ": trajectory step is not uniform");
  }
}

double max_abs_over(const std::vector<Vector>& covectors,
                    std::span<const Index> components) {
  double m = 0.0;
  for (const Vector& v : covectors) {
    if (components.empty()) {
      if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
    } else {
      for (Index a : components) m = std::max(m, std::abs(v[a]));
    }
  }
  return m;
}

std::vector<Vector> elh_residual_covectors(const AlgebroidChart& chart,
                                           const HerglotzLagrangian& lagrangian,
                                           const Trajectory& trajectory) {
  require_uniform(trajectory, "elh_residual");
  const Index n = chart.base_dim();
  const Index r = chart.fiber_rank();
  const double h = trajectory.step_size;

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
    const Vector pdot = fd::time_derivative(momenta, k, h);
    const Matrix rho = chart.anchor(s.x);
    const Tensor3 c = chart.structure(s.x);
    Vector res(r);
    for (Index a = 0; a < r; ++a) {
      double bracket = 0.0;
      for (Index gm = 0; gm < r; ++gm) {
        double coef = 0.0;
        for (Index b = 0; b < r; ++b) coef += c(gm, a, b) * s.y[b];
        bracket += coef * g.dy[gm];
      }
      double anchored = 0.0;
      for (Index i = 0; i < n; ++i) anchored += rho(i, a) * g.dx[i];
      res[a] = pdot[a] + bracket - anchored - g.dz * g.dy[a];
    }
    out.push_back(std::move(res));
  }
  return out;
}

double elh_residual(const AlgebroidChart& chart,
                    const HerglotzLagrangian& lagrangian,
                    const Trajectory& trajectory,
                    std::span<const Index> components) {
  return max_abs_over(elh_residual_covectors(chart, lagrangian, trajectory),
                      components);
}

}  // namespace herglotz
