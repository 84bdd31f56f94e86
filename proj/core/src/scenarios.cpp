#include "herglotz/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "herglotz/errors.hpp"
#include "herglotz/finite_difference.hpp"

namespace herglotz {
namespace {

void require_size(const Vector& v, Index n, const char* what) {
  if (v.size() != n) {
    throw ArgumentError(std::string(what) + " has size " +
                        std::to_string(v.size()) + ", expected " +
                        std::to_string(n));
  }
  if (!v.allFinite()) throw ArgumentError(std::string(what) + " is not finite");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be > 0");
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be >= 0");
  }
}

ReferenceLaw energy_law(double rate, double tol) {
  return {"energy_decay", tol,
          [rate](const Trajectory&, const InvariantLog& log) {
            return exponential_law_deviation(log.times, log.energy, rate);
          }};
}

ReferenceLaw momentum_law(std::string name, std::size_t section, double tol) {
  return {std::move(name), tol,
          [section](const Trajectory&, const InvariantLog& log) {
            return log.momenta.at(section).drift;
          }};
}

State make_state(Vector x, Vector y, double z) {
  State s;
  s.x = std::move(x);
  s.y = std::move(y);
  s.z = z;
  s.ell = 0.0;
  return s;
}

Matrix rotation(double theta) {
  Matrix r(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  r << c, -s, s, c;
  return r;
}

// Linear connection 𝓐^A(q) = ½ field (−q₂, q₁, 0, …) in every internal row.
std::function<Matrix(const Vector&)> wong_connection(Index n, Index d,
                                                     double field) {
  return [n, d, field](const Vector& q) {
    Matrix a = Matrix::Zero(d, n);
    for (Index A = 0; A < d; ++A) {
      a(A, 0) = -0.5 * field * q[1];
      a(A, 1) = 0.5 * field * q[0];
    }
    return a;
  };
}

Index group_dim(const std::string& group) {
  if (group == "u1") return 1;
  if (group == "su2") return 3;
  throw ArgumentError("wong: unknown group '" + group + "' (use u1 or su2)");
}

Tensor3 group_constants(const std::string& group) {
  return group == "u1" ? Tensor3(1, 1, 1) : levi_civita();
}

}  // namespace

IntegratorConfig Scenario::default_config(double step) const {
  IntegratorConfig cfg;
  cfg.step = step;
  cfg.frozen_fiber = frozen_fiber;
  return cfg;
}

// ---------------------------------------------------------------------------

Scenario rayleigh_scenario(const RayleighParams& p) {
  if (p.n <= 0) throw ArgumentError("rayleigh: n must be positive");
  require_size(p.x0, p.n, "rayleigh: x0");
  require_size(p.y0, p.n, "rayleigh: y0");
  require_positive(p.mass, "rayleigh: mass");
  require_nonnegative(p.stiffness, "rayleigh: stiffness");
  require_nonnegative(p.gamma, "rayleigh: gamma");
  require_positive(p.horizon, "rayleigh: horizon");

  const Matrix id = Matrix::Identity(p.n, p.n);
  Scenario s{"rayleigh",
             tangent_bundle(p.n),
             rayleigh(constant_metric(p.mass * id),
                      quadratic_potential(p.stiffness * id), p.gamma),
             {},
             make_state(p.x0, p.y0, p.z0),
             p.horizon,
             {},
             {},
             {},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  if (p.n == 2) {
    SymmetrySection rot;
    rot.label = "rotation";
    rot.sigma = [](const Vector& x) {
      return (Vector(2) << -x[1], x[0]).finished();
    };
    rot.d_sigma = [](const Vector&) {
      return (Matrix(2, 2) << 0.0, -1.0, 1.0, 0.0).finished();
    };
    s.sections.push_back(std::move(rot));
    s.laws.push_back(momentum_law("angular_momentum_decay", 0, 1e-7));
  }
  return s;
}

Scenario rigid_body_scenario(const RigidBodyParams& p) {
  require_size(p.inertia, 3, "rigid_body: inertia");
  require_size(p.xi0, 3, "rigid_body: xi0");
  require_nonnegative(p.gamma, "rigid_body: gamma");
  require_positive(p.horizon, "rigid_body: horizon");
  const Matrix inertia = p.inertia.asDiagonal();

  Scenario s{"rigid_body", so3(),
             rigid_body(inertia, p.gamma),
             {},
             make_state(Vector(0), p.xi0, p.z0),
             p.horizon,
             {},
             {},
             {},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  if (p.inertia[0] == p.inertia[1]) {
    s.sections.push_back(constant_section("e3", Vector::Unit(3, 2)));
    s.laws.push_back(momentum_law("momentum_decay", 0, 1e-7));
  }
  const double gamma = p.gamma;
  s.laws.push_back(
      {"casimir_decay", 1e-6,
       [inertia, gamma](const Trajectory& t, const InvariantLog&) {
         const double m0 = (inertia * t.states.front().y).norm();
         double worst = 0.0;
         for (std::size_t k = 0; k < t.size(); ++k) {
           const double m = (inertia * t.states[k].y).norm();
           worst = std::max(
               worst, std::abs(m - m0 * std::exp(-gamma * t.times[k])));
         }
         return worst / std::max(m0, 1e-12);
       }});
  return s;
}

Scenario wong_scenario(const WongParams& p) {
  if (p.n < 2) throw ArgumentError("wong: n must be >= 2");
  const Index d = group_dim(p.group);
  require_size(p.q0, p.n, "wong: q0");
  require_size(p.qdot0, p.n, "wong: qdot0");
  require_size(p.v0, d, "wong: v0");
  require_positive(p.kappa, "wong: kappa");
  require_nonnegative(p.gamma, "wong: gamma");
  require_positive(p.horizon, "wong: horizon");

  const Index n = p.n;
  const Tensor3 c = group_constants(p.group);
  auto connection = wong_connection(n, d, p.field);
  // ∂₁𝓐₂ − ∂₂𝓐₁ = field; the quadratic term uses the exact 𝓐.
  const double field = p.field;
  auto curvature = [n, d, c, connection, field](const Vector& q) {
    const Matrix a = connection(q);
    Tensor3 b(d, n, n);
    for (Index D = 0; D < d; ++D) {
      b(D, 0, 1) = field;
      b(D, 1, 0) = -field;
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          double quad = 0.0;
          for (Index E = 0; E < d; ++E)
            for (Index B = 0; B < d; ++B) quad += c(D, E, B) * a(E, i) * a(B, j);
          b(D, i, j) -= quad;
        }
      }
    }
    return b;
  };

  Vector y0(n + d);
  y0 << p.qdot0, p.v0;
  Scenario s{"wong",
             atiyah_chart(n, d, connection, curvature, c, "atiyah_" + p.group),
             wong_reduced(constant_metric(Matrix::Identity(n, n)),
                          p.kappa * Matrix::Identity(d, d), p.gamma),
             {},
             make_state(p.q0, y0, p.z0),
             p.horizon,
             {},
             {},
             {},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  if (d == 1) {
    s.sections.push_back(constant_section("internal", Vector::Unit(n + 1, n)));
    s.laws.push_back(momentum_law("internal_momentum_decay", 0, 1e-7));
  }
  return s;
}

Scenario magnetic_scenario(const MagneticParams& p) {
  require_positive(p.mass, "magnetic: mass");
  require_nonnegative(p.stiffness, "magnetic: stiffness");
  require_nonnegative(p.gamma, "magnetic: gamma");
  require_size(p.x0, 2, "magnetic: x0");
  require_size(p.xdot0, 2, "magnetic: xdot0");
  require_positive(p.horizon, "magnetic: horizon");
  if (!std::isfinite(p.charge) || !std::isfinite(p.field)) {
    throw ArgumentError("magnetic: charge and field must be finite");
  }

  const double field = p.field;
  auto curvature = [field](const Vector&) {
    Tensor3 b(1, 2, 2);
    b(0, 0, 1) = field;
    b(0, 1, 0) = -field;
    return b;
  };
  const Matrix id = Matrix::Identity(2, 2);
  Scenario s{"magnetic",
             atiyah_chart(2, 1, wong_connection(2, 1, p.field), curvature,
                          Tensor3(1, 1, 1), "atiyah_u1"),
             magnetic(p.mass, constant_metric(id), p.charge,
                      quadratic_potential(p.stiffness * id), p.gamma),
             {},
             make_state(p.x0, (Vector(3) << p.xdot0, 0.0).finished(), p.z0),
             p.horizon,
             {},
             {2},
             {0, 1},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  const double charge = p.charge;
  s.laws.push_back({"charge_momentum", 1e-12,
                    [charge](const Trajectory& t, const InvariantLog&) {
                      double worst = 0.0;
                      for (const State& st : t.states) {
                        // p_u = ∂L/∂u = e; u never moves.
                        worst = std::max(worst, std::abs(st.y[2]));
                      }
                      return worst * std::abs(charge);
                    }});
  if (p.stiffness == 0.0) {
    const double gamma = p.gamma;
    s.laws.push_back(
        {"speed_decay", 1e-6, [gamma](const Trajectory& t, const InvariantLog&) {
           const double s0 = t.states.front().y.head(2).norm();
           double worst = 0.0;
           for (std::size_t k = 0; k < t.size(); ++k) {
             const double sp = t.states[k].y.head(2).norm();
             worst = std::max(
                 worst, std::abs(sp - s0 * std::exp(-gamma * t.times[k])));
           }
           return worst / std::max(s0, 1e-12);
         }});
    if (p.gamma == 0.0 && p.field != 0.0 && p.charge != 0.0) {
      // ẍ = ω J ẋ with ω = e𝓑/m: a circle of radius |ẋ|/|ω| about
      // c = x + (ẋ₂, −ẋ₁)/ω.
      const double omega = p.charge * p.field / p.mass;
      s.laws.push_back(
          {"cyclotron_radius", 1e-6,
           [omega](const Trajectory& t, const InvariantLog&) {
             const State& s0 = t.states.front();
             const Vector v0 = s0.y.head(2);
             const Vector centre =
                 s0.x + (Vector(2) << v0[1], -v0[0]).finished() / omega;
             const double radius = v0.norm() / std::abs(omega);
             double worst = 0.0;
             for (const State& st : t.states) {
               worst = std::max(worst, std::abs((st.x - centre).norm() - radius));
             }
             return worst / std::max(radius, 1e-12);
           }});
    }
  }
  return s;
}

Scenario thermoviscous_scenario(const ThermoviscousParams& p) {
  require_size(p.inertia, 3, "thermoviscous: inertia");
  require_size(p.xi0, 3, "thermoviscous: xi0");
  require_positive(p.t0, "thermoviscous: T0");
  require_nonnegative(p.gamma, "thermoviscous: gamma");
  require_positive(p.horizon, "thermoviscous: horizon");
  const Matrix inertia = p.inertia.asDiagonal();

  Scenario s{"thermoviscous", so3(),
             thermoviscous(inertia, 0.0, p.t0, p.gamma),
             {},
             make_state(Vector(0), p.xi0, p.s0),
             p.horizon,
             {},
             {},
             {},
             -p.t0};
  s.laws.push_back(energy_law(-p.t0, 1e-6));
  if (p.inertia[0] == p.inertia[1]) {
    s.sections.push_back(constant_section("e3", Vector::Unit(3, 2)));
    s.laws.push_back(momentum_law("momentum_decay", 0, 1e-7));
  }
  if (p.xi0.isZero(0.0)) {
    const double t0 = p.t0;
    s.laws.push_back({"entropy_decay", 1e-6,
                      [t0](const Trajectory& t, const InvariantLog&) {
                        std::vector<double> z;
                        for (const State& st : t.states) z.push_back(st.z);
                        return exponential_law_deviation(t.times, z, -t0);
                      }});
  }
  return s;
}

// ---------------------------------------------------------------------------

Matrix hamel_frame(const HamelParams& p, const Vector& q) {
  return rotation(p.twist * q[0]);
}

namespace {

HerglotzLagrangian hamel_base_lagrangian(const HamelParams& p) {
  return rayleigh(constant_metric(Matrix::Identity(2, 2)),
                  quadratic_potential(p.stiffness.asDiagonal()), p.gamma);
}

void check_hamel(const HamelParams& p) {
  require_size(p.stiffness, 2, "hamel: stiffness");
  require_size(p.q0, 2, "hamel: q0");
  require_size(p.qdot0, 2, "hamel: qdot0");
  require_nonnegative(p.gamma, "hamel: gamma");
  require_positive(p.horizon, "hamel: horizon");
  if (!std::isfinite(p.twist)) throw ArgumentError("hamel: twist not finite");
}

}  // namespace

Scenario hamel_coordinate_scenario(const HamelParams& p) {
  check_hamel(p);
  Scenario s{"hamel_coordinates",
             tangent_bundle(2),
             hamel_base_lagrangian(p),
             {},
             make_state(p.q0, p.qdot0, p.z0),
             p.horizon,
             {},
             {},
             {},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  return s;
}

Scenario hamel_scenario(const HamelParams& p) {
  check_hamel(p);
  constexpr double kFrameStep = 1e-5;
  auto frame = [p](const Vector& q) { return hamel_frame(p, q); };
  auto inverse = [frame](const Vector& q) -> Matrix {
    const Matrix a = frame(q);
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw EvaluationError("hamel: singular frame");
    return lu.inverse();
  };

  // Column α of a⁻¹ is the frame field X_α; [X_α, X_β] = C^γ_{αβ} X_γ.
  auto structure = [frame, inverse](const Vector& q) {
    const Index n = q.size();
    const Matrix x = inverse(q);
    std::vector<Matrix> dx;  // dx[j] = ∂_j a⁻¹
    Vector probe = q;
    for (Index j = 0; j < n; ++j) {
      probe[j] = q[j] + kFrameStep;
      const Matrix plus = inverse(probe);
      probe[j] = q[j] - kFrameStep;
      const Matrix minus = inverse(probe);
      probe[j] = q[j];
      dx.push_back((plus - minus) / (2.0 * kFrameStep));
    }
    const Matrix a = frame(q);
    Tensor3 c(n, n, n);
    for (Index al = 0; al < n; ++al) {
      for (Index be = al + 1; be < n; ++be) {
        Vector br = Vector::Zero(n);
        for (Index j = 0; j < n; ++j) {
          br += x(j, al) * dx[j].col(be) - x(j, be) * dx[j].col(al);
        }
        const Vector coeff = a * br;
        for (Index g = 0; g < n; ++g) {
          c(g, al, be) = coeff[g];
          c(g, be, al) = -coeff[g];
        }
      }
    }
    return c;
  };
  AlgebroidChart chart("hamel_frame", 2, 2, inverse, structure);

  const HerglotzLagrangian base = hamel_base_lagrangian(p);
  HerglotzLagrangian::Partials parts;
  parts.d_y = [base, inverse](const Vector& q, const Vector& y, double z) {
    const Matrix ai = inverse(q);
    return (ai.transpose() * base.gradient(q, ai * y, z).dy).eval();
  };
  parts.d_z = [base, inverse](const Vector& q, const Vector& y, double z) {
    return base.gradient(q, inverse(q) * y, z).dz;
  };
  parts.d2_yy = [base, inverse](const Vector& q, const Vector& y, double z) {
    const Matrix ai = inverse(q);
    return (ai.transpose() * base.hessian_blocks(q, ai * y, z).yy * ai).eval();
  };
  parts.d2_yz = [base, inverse](const Vector& q, const Vector& y, double z) {
    const Matrix ai = inverse(q);
    return (ai.transpose() * base.hessian_blocks(q, ai * y, z).yz).eval();
  };
  HerglotzLagrangian lag(
      "hamel_rayleigh", 2, 2,
      [base, inverse](const Vector& q, const Vector& y, double z) {
        return base.eval(q, inverse(q) * y, z);
      },
      std::move(parts));

  Scenario s{"hamel",
             std::move(chart),
             std::move(lag),
             {},
             make_state(p.q0, hamel_frame(p, p.q0) * p.qdot0, p.z0),
             p.horizon,
             {},
             {},
             {},
             -p.gamma};
  s.laws.push_back(energy_law(-p.gamma, 1e-6));
  s.laws.push_back(
      {"frame_invariance", 1e-6, [p](const Trajectory& t, const InvariantLog&) {
         const Scenario coord = hamel_coordinate_scenario(p);
         IntegratorConfig cfg = coord.default_config(t.step_size);
         const Trajectory ref = integrate(coord.chart, coord.lagrangian,
                                          coord.initial, t.times.back(), cfg);
         const Trajectory conv = hamel_to_coordinates(p, t);
         if (ref.size() != conv.size()) {
           throw NumericError("frame_invariance: sample counts differ");
         }
         double worst = 0.0;
         for (std::size_t k = 0; k < ref.size(); ++k) {
           const State& a = ref.states[k];
           const State& b = conv.states[k];
           worst = std::max({worst, (a.x - b.x).cwiseAbs().maxCoeff(),
                             (a.y - b.y).cwiseAbs().maxCoeff(),
                             std::abs(a.z - b.z)});
         }
         return worst;
       }});
  return s;
}

Trajectory hamel_to_coordinates(const HamelParams& p, const Trajectory& t) {
  Trajectory out = t;
  for (State& s : out.states) {
    s.y = hamel_frame(p, s.x).partialPivLu().solve(s.y);
  }
  out.scenario_label = t.scenario_label + "_coordinates";
  return out;
}

// ---------------------------------------------------------------------------

ReductionReport reduction_crosscheck(const WongParams& p,
                                     const IntegratorConfig& config) {
  if (p.group != "u1") {
    throw ArgumentError(
        "reduction_crosscheck: only the abelian (u1) case is supported");
  }
  const Scenario reduced = wong_scenario(p);
  const Index n = p.n;
  const Index m = n + 1;
  const double kappa = p.kappa;
  const double gamma = p.gamma;
  auto conn = wong_connection(n, 1, p.field);

  // Unreduced coordinates (q, θ); w = θ̇ + 𝓐·q̇.
  auto w_of = [conn, n](const Vector& x, const Vector& y) {
    return y[n] + conn(x.head(n)).row(0).dot(y.head(n));
  };
  HerglotzLagrangian::Partials parts;
  parts.d_y = [conn, w_of, kappa, n, m](const Vector& x, const Vector& y,
                                        double) -> Vector {
    const Vector a = conn(x.head(n)).row(0).transpose();
    const double w = w_of(x, y);
    Vector out(m);
    out.head(n) = kappa * w * a + y.head(n);
    out[n] = kappa * w;
    return out;
  };
  parts.d_z = [gamma](const Vector&, const Vector&, double) { return -gamma; };
  parts.d2_yy = [conn, kappa, n, m](const Vector& x, const Vector&, double) {
    const Vector a = conn(x.head(n)).row(0).transpose();
    Matrix h(m, m);
    h.topLeftCorner(n, n) = kappa * a * a.transpose() + Matrix::Identity(n, n);
    h.topRightCorner(n, 1) = kappa * a;
    h.bottomLeftCorner(1, n) = kappa * a.transpose();
    h(n, n) = kappa;
    return h;
  };
  parts.d2_yz = [m](const Vector&, const Vector&, double) -> Vector {
    return Vector::Zero(m);
  };
  HerglotzLagrangian unreduced_l(
      "wong_unreduced", m, m,
      [w_of, kappa, gamma, n](const Vector& x, const Vector& y, double z) {
        const double w = w_of(x, y);
        return 0.5 * (kappa * w * w + y.head(n).squaredNorm()) - gamma * z;
      },
      std::move(parts));

  State init;
  init.x = Vector::Zero(m);
  init.x.head(n) = p.q0;
  init.y = Vector(m);
  init.y.head(n) = p.qdot0;
  init.y[n] = p.v0[0] - conn(p.q0).row(0).dot(p.qdot0);
  init.z = p.z0;

  IntegratorConfig cfg = config;
  cfg.frozen_fiber.clear();
  const Trajectory red = integrate(reduced.chart, reduced.lagrangian,
                                   reduced.initial, p.horizon, cfg, "reduced");
  const Trajectory full = integrate(tangent_bundle(m), unreduced_l, init,
                                    p.horizon, cfg, "unreduced");
  if (red.size() != full.size()) {
    throw NumericError("reduction_crosscheck: sample counts differ");
  }

  ReductionReport rep;
  for (std::size_t k = 0; k < red.size(); ++k) {
    const State& a = red.states[k];
    const State& b = full.states[k];
    rep.base_deviation =
        std::max({rep.base_deviation,
                  (a.x - b.x.head(n)).cwiseAbs().maxCoeff(),
                  (a.y.head(n) - b.y.head(n)).cwiseAbs().maxCoeff()});
    rep.internal_deviation =
        std::max(rep.internal_deviation, std::abs(a.y[n] - w_of(b.x, b.y)));
    rep.z_deviation = std::max(rep.z_deviation, std::abs(a.z - b.z));
  }
  rep.max_deviation =
      std::max({rep.base_deviation, rep.internal_deviation, rep.z_deviation});
  return rep;
}

std::vector<ScenarioInfo> available_scenarios() {
  return {
      {"rayleigh", "Rayleigh-damped oscillator on TQ (n = 1 or 2)"},
      {"rigid_body", "damped free rigid body on so(3)"},
      {"wong", "dissipative Wong particle on an Atiyah algebroid (u1 or su2)"},
      {"magnetic", "damped charged particle in a constant magnetic field"},
      {"thermoviscous", "thermoviscous rigid body with entropy as z"},
      {"hamel", "Rayleigh oscillator in a rotating quasi-velocity frame"},
  };
}

}  // namespace herglotz
