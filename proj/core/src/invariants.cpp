#include "herglotz/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {

Vector SymmetrySection::eval(const Vector& x) const {
  if (!sigma) throw ArgumentError("section '" + label + "' has no sigma");
  Vector s = sigma(x);
  if (!s.allFinite()) {
    throw EvaluationError("section '" + label + "' is not finite");
  }
  return s;
}

Matrix SymmetrySection::jacobian(const Vector& x, double fd_step) const {
  if (d_sigma) return d_sigma(x);
  return fd::jacobian([this](const Vector& p) { return eval(p); }, x, fd_step);
}

SymmetrySection constant_section(std::string label, const Vector& value) {
  SymmetrySection s;
  s.label = std::move(label);
  s.sigma = [value](const Vector&) { return value; };
  s.d_sigma = [value](const Vector& x) {
    return Matrix::Zero(value.size(), x.size()).eval();
  };
  return s;
}

double energy(const HerglotzLagrangian& lagrangian, const State& state) {
  const Gradient g = lagrangian.gradient(state.x, state.y, state.z);
  return g.dy.dot(state.y) - lagrangian.eval(state.x, state.y, state.z);
}

double symmetry_residual(const AlgebroidChart& chart,
                         const HerglotzLagrangian& lagrangian,
                         const SymmetrySection& section, const Vector& x,
                         const Vector& y, double z) {
  const Index r = chart.fiber_rank();
  const Vector s = section.eval(x);
  if (s.size() != r) throw ArgumentError("symmetry_residual: section rank");
  const Matrix rho = chart.anchor(x);
  const Tensor3 c = chart.structure(x);
  const Gradient g = lagrangian.gradient(x, y, z);

  double total = (rho * s).dot(g.dx);
  if (chart.base_dim() > 0) {
    total += (section.jacobian(x) * (rho * y)).dot(g.dy);
  }
  for (Index b = 0; b < r; ++b) {
    double acc = 0.0;
    for (Index a = 0; a < r; ++a) {
      for (Index k = 0; k < r; ++k) acc += c(b, a, k) * y[a] * s[k];
    }
    total += acc * g.dy[b];
  }
  return std::abs(total);
}

double noether_momentum(const HerglotzLagrangian& lagrangian,
                        const SymmetrySection& section, const State& state) {
  return lagrangian.gradient(state.x, state.y, state.z).dy.dot(
      section.eval(state.x));
}

double energy_balance_residual(const HerglotzLagrangian& lagrangian,
                               const Trajectory& trajectory) {
  require_uniform(trajectory, "energy_balance_residual");
  std::vector<double> e;
  e.reserve(trajectory.size());
  for (const State& s : trajectory.states) e.push_back(energy(lagrangian, s));
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const State& s = trajectory.states[k];
    const double dz = lagrangian.gradient(s.x, s.y, s.z).dz;
    const double edot = fd::time_derivative(e, k, trajectory.step_size);
    worst = std::max(worst, std::abs(edot - dz * e[k]));
  }
  return worst;
}

double dissipated_drift(std::span<const double> quantity,
                        std::span<const double> lambda, double floor) {
  if (quantity.size() != lambda.size()) {
    throw ArgumentError("dissipated_drift: length mismatch");
  }
  if (quantity.empty()) return 0.0;
  const double q0 = quantity[0] * lambda[0];
  double worst = 0.0;
  for (std::size_t k = 0; k < quantity.size(); ++k) {
    worst = std::max(worst, std::abs(lambda[k] * quantity[k] - q0));
  }
  return worst / std::max(std::abs(q0), floor);
}

double exponential_law_deviation(std::span<const double> times,
                                 std::span<const double> quantity, double rate,
                                 double floor) {
  if (times.size() != quantity.size()) {
    throw ArgumentError("exponential_law_deviation: length mismatch");
  }
  if (quantity.empty()) return 0.0;
  const double q0 = quantity[0];
  double worst = 0.0;
  for (std::size_t k = 0; k < quantity.size(); ++k) {
    const double law = q0 * std::exp(rate * (times[k] - times[0]));
    worst = std::max(worst, std::abs(quantity[k] - law));
  }
  return worst / std::max(std::abs(q0), floor);
}

InvariantLog build_invariant_log(const AlgebroidChart& chart,
                                 const HerglotzLagrangian& lagrangian,
                                 const std::vector<SymmetrySection>& sections,
                                 const Trajectory& trajectory,
                                 double symmetry_tol) {
  InvariantLog log;
  const std::size_t m = trajectory.size();
  log.times = trajectory.times;
  log.energy.reserve(m);
  log.lambda.reserve(m);
  log.rescaled_energy.reserve(m);
  log.dz.reserve(m);
  log.momenta.resize(sections.size());
  for (std::size_t j = 0; j < sections.size(); ++j) {
    log.momenta[j].label = sections[j].label;
    log.momenta[j].values.reserve(m);
    log.momenta[j].rescaled.reserve(m);
  }

  for (const State& s : trajectory.states) {
    const Gradient g = lagrangian.gradient(s.x, s.y, s.z);
    const double e = g.dy.dot(s.y) - lagrangian.eval(s.x, s.y, s.z);
    const double lam = std::exp(-s.ell);
    log.energy.push_back(e);
    log.lambda.push_back(lam);
    log.rescaled_energy.push_back(lam * e);
    log.dz.push_back(g.dz);
    for (std::size_t j = 0; j < sections.size(); ++j) {
      MomentumSeries& ms = log.momenta[j];
      const double jv = g.dy.dot(sections[j].eval(s.x));
      ms.values.push_back(jv);
      ms.rescaled.push_back(lam * jv);
      ms.max_symmetry_residual =
          std::max(ms.max_symmetry_residual,
                   symmetry_residual(chart, lagrangian, sections[j], s.x, s.y,
                                     s.z));
    }
  }
  log.energy_drift = dissipated_drift(log.energy, log.lambda);
  for (MomentumSeries& ms : log.momenta) {
    ms.validated = ms.max_symmetry_residual <= symmetry_tol;
    ms.drift = dissipated_drift(ms.values, log.lambda);
  }
  return log;
}

}  // namespace herglotz
