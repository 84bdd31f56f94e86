#include "scenario_factory.hpp"

#include "herglotz/errors.hpp"

namespace herglotz::app {
namespace {

BuiltScenario rayleigh_from(ParamTable& t, std::optional<double> horizon) {
  RayleighParams p;
  p.n = t.integer("n", 1);
  if (p.n <= 0) throw ConfigError("rayleigh: n must be positive");
  p.gamma = t.number("gamma", p.gamma);
  p.stiffness = t.number("stiffness", p.stiffness);
  p.mass = t.number("mass", p.mass);
  p.x0 = t.vector("x0", Vector::Ones(p.n));
  p.y0 = t.vector("y0", Vector::Zero(p.n));
  p.z0 = t.number("z0", p.z0);
  if (horizon) p.horizon = *horizon;
  return {rayleigh_scenario(p), std::nullopt};
}

BuiltScenario rigid_body_from(ParamTable& t, std::optional<double> horizon) {
  RigidBodyParams p;
  p.inertia = t.vector("inertia", p.inertia);
  p.gamma = t.number("gamma", p.gamma);
  p.xi0 = t.vector("xi0", p.xi0);
  p.z0 = t.number("z0", p.z0);
  if (horizon) p.horizon = *horizon;
  return {rigid_body_scenario(p), std::nullopt};
}

BuiltScenario wong_from(ParamTable& t, std::optional<double> horizon) {
  WongParams p;
  p.group = t.text("group", p.group);
  p.n = t.integer("n", p.n);
  p.field = t.number("field", p.field);
  p.kappa = t.number("kappa", p.kappa);
  p.gamma = t.number("gamma", p.gamma);
  p.q0 = t.vector("q0", p.q0);
  p.qdot0 = t.vector("qdot0", p.qdot0);
  const Vector v0_default =
      p.group == "su2" ? (Vector(3) << 0.5, 0.2, -0.1).finished() : p.v0;
  p.v0 = t.vector("v0", v0_default);
  p.z0 = t.number("z0", p.z0);
  if (horizon) p.horizon = *horizon;
  return {wong_scenario(p), p};
}

BuiltScenario magnetic_from(ParamTable& t, std::optional<double> horizon) {
  MagneticParams p;
  p.mass = t.number("mass", p.mass);
  p.charge = t.number("charge", p.charge);
  p.field = t.number("field", p.field);
  p.stiffness = t.number("stiffness", p.stiffness);
  p.gamma = t.number("gamma", p.gamma);
  p.x0 = t.vector("x0", p.x0);
  p.xdot0 = t.vector("xdot0", p.xdot0);
  p.z0 = t.number("z0", p.z0);
  if (horizon) p.horizon = *horizon;
  return {magnetic_scenario(p), std::nullopt};
}

BuiltScenario thermoviscous_from(ParamTable& t, std::optional<double> horizon) {
  ThermoviscousParams p;
  p.inertia = t.vector("inertia", p.inertia);
  p.t0 = t.number("t0", p.t0);
  p.gamma = t.number("gamma", p.gamma);
  p.xi0 = t.vector("xi0", p.xi0);
  p.s0 = t.number("s0", p.s0);
  if (horizon) p.horizon = *horizon;
  return {thermoviscous_scenario(p), std::nullopt};
}

BuiltScenario hamel_from(ParamTable& t, std::optional<double> horizon) {
  HamelParams p;
  p.twist = t.number("twist", p.twist);
  p.gamma = t.number("gamma", p.gamma);
  p.stiffness = t.vector("stiffness", p.stiffness);
  p.q0 = t.vector("q0", p.q0);
  p.qdot0 = t.vector("qdot0", p.qdot0);
  p.z0 = t.number("z0", p.z0);
  if (horizon) p.horizon = *horizon;
  return {hamel_scenario(p), std::nullopt};
}

}  // namespace

BuiltScenario build_scenario(const std::string& name, ParamTable& params,
                             std::optional<double> horizon) {
  try {
    if (name == "rayleigh") return rayleigh_from(params, horizon);
    if (name == "rigid_body") return rigid_body_from(params, horizon);
    if (name == "wong") return wong_from(params, horizon);
    if (name == "magnetic") return magnetic_from(params, horizon);
    if (name == "thermoviscous") return thermoviscous_from(params, horizon);
    if (name == "hamel") return hamel_from(params, horizon);
  } catch (const herglotz::ArgumentError& e) {
    throw ConfigError(std::string("invalid scenario parameters: ") + e.what());
  }
  std::string known;
  for (const auto& info : available_scenarios()) {
    known += (known.empty() ? "" : ", ") + info.name;
  }
  throw ConfigError("unknown scenario '" + name + "' (known: " + known + ")");
}

}  // namespace herglotz::app
