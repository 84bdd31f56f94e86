#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "herglotz/connections.hpp"
#include "herglotz/errors.hpp"
#include "scenario_factory.hpp"

namespace herglotz::app {
namespace {

using json = nlohmann::json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

CheckResult make(const std::string& name, double measured, double tol,
                 std::string note = {}) {
  return {name, measured, tol, measured <= tol, std::move(note)};
}

std::vector<CheckResult> evaluate(const RunConfig& config, const Scenario& s,
                                  const std::optional<WongParams>& wong,
                                  const Trajectory& traj, const InvariantLog& log,
                                  const CheckSpec& spec) {
  const auto& comps = s.checked_components;
  const Index n = s.chart.base_dim();
  const Index r = s.chart.fiber_rank();
  const double tol = spec.tolerance;

  if (spec.name == "elh_residual") {
    return {make(spec.name, elh_residual(s.chart, s.lagrangian, traj, comps), tol)};
  }
  if (spec.name == "energy_balance") {
    return {make(spec.name, energy_balance_residual(s.lagrangian, traj), tol)};
  }
  if (spec.name == "noether_drift") {
    double worst = 0.0;
    std::string note;
    for (const MomentumSeries& m : log.momenta) {
      if (m.validated) {
        worst = std::max(worst, m.drift);
      } else {
        note += (note.empty() ? "unvalidated: " : ", ") + m.label;
      }
    }
    if (log.momenta.empty()) note = "no symmetry sections registered";
    return {make(spec.name, worst, tol, note)};
  }
  if (spec.name == "intrinsic_residual") {
    return {make(spec.name,
                 ebar_star_residual(TMConnection::trivial(n, r), s.chart,
                                    s.lagrangian, traj, comps),
                 tol)};
  }
  if (spec.name == "connection_independence") {
    const TMConnection trivial = TMConnection::trivial(n, r);
    double worst = 0.0;
    for (int i = 0; i < config.random_connections; ++i) {
      const TMConnection rnd = TMConnection::random_constant(
          n, r, config.seed + static_cast<std::uint64_t>(i));
      worst = std::max(worst, connection_independence(trivial, rnd, s.chart,
                                                      s.lagrangian, traj));
    }
    return {make(spec.name, worst, tol,
                 fmt::format("{} random connections from seed {}",
                             config.random_connections, config.seed))};
  }
  if (spec.name == "hph_residuals") {
    const HphMaxima m = hph_maxima(s.chart, s.lagrangian,
                                   canonical_hph_curves(s.lagrangian, traj), comps);
    return {make(spec.name, m.max(), tol,
                 fmt::format("admiss={:.3g} av={:.3g} legendre={:.3g} "
                             "dynamics={:.3g} contact={:.3g}",
                             m.admiss, m.av, m.legendre, m.dynamics, m.contact))};
  }
  if (spec.name == "reduction_crosscheck") {
    IntegratorConfig cfg = config.integrator;
    const ReductionReport rep = reduction_crosscheck(*wong, cfg);
    return {make(spec.name, rep.max_deviation, tol,
                 fmt::format("base={:.3g} internal={:.3g} z={:.3g}",
                             rep.base_deviation, rep.internal_deviation,
                             rep.z_deviation))};
  }
  if (spec.name == "algebroid_identities") {
    const ValidationReport v = validate_identities(
        s.chart, default_sample_points(n, 100, config.seed),
        AlgebroidChart::kDefaultFdStep, tol);
    const double worst = std::max(
        {v.max_skew_residual, v.max_compat_residual, v.max_jacobi_residual});
    return {make(spec.name, worst, tol,
                 fmt::format("skew={:.3g} compat={:.3g} jacobi={:.3g}",
                             v.max_skew_residual, v.max_compat_residual,
                             v.max_jacobi_residual))};
  }
  if (spec.name == "energy_decay") {
    return {make(spec.name,
                 exponential_law_deviation(log.times, log.energy, s.energy_rate),
                 tol, fmt::format("E(t) = E(0) exp({} t)", s.energy_rate))};
  }
  if (spec.name == "reference_laws") {
    std::vector<CheckResult> out;
    for (const ReferenceLaw& law : s.laws) {
      out.push_back(make("law:" + law.name, law.measure(traj, log), law.tolerance));
    }
    return out;
  }
  throw ConfigError("unknown check '" + spec.name + "'");
}

}  // namespace

bool CheckReport::overall_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HERGLOTZ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<unsigned>(v);
    }
  }
  return hw;
}

std::vector<CheckSpec> default_suite(const Scenario& scenario, bool has_wong) {
  std::vector<CheckSpec> out;
  for (const std::string& name : known_checks()) {
    if (name == "reduction_crosscheck" && !has_wong) continue;
    out.push_back({name, default_tolerance(name)});
  }
  (void)scenario;
  return out;
}

std::vector<CheckResult> run_checks(const RunConfig& config,
                                    const Scenario& scenario,
                                    const std::optional<WongParams>& wong,
                                    const Trajectory& trajectory,
                                    const InvariantLog& log,
                                    const std::vector<CheckSpec>& specs,
                                    unsigned threads) {
  std::vector<std::vector<CheckResult>> slots(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        slots[i] = evaluate(config, scenario, wong, trajectory, log, specs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(
      1u, std::min<unsigned>(threads, static_cast<unsigned>(specs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<CheckResult> out;
  for (auto& group : slots) {
    for (auto& c : group) out.push_back(std::move(c));
  }
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory, const InvariantLog& log) {
  if (trajectory.size() == 0) return {};
  const Index n = trajectory.states.front().x.size();
  const Index r = trajectory.states.front().y.size();
  std::string out = "t";
  for (Index i = 0; i < n; ++i) out += fmt::format(",x_{}", i + 1);
  for (Index a = 0; a < r; ++a) out += fmt::format(",y_{}", a + 1);
  out += ",z,ell,lambda,E";
  for (const MomentumSeries& m : log.momenta) out += ",J_" + m.label;
  out += '\n';

  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const State& s = trajectory.states[k];
    out += num(trajectory.times[k]);
    for (Index i = 0; i < n; ++i) (out += ',') += num(s.x[i]);
    for (Index a = 0; a < r; ++a) (out += ',') += num(s.y[a]);
    (out += ',') += num(s.z);
    (out += ',') += num(s.ell);
    (out += ',') += num(log.lambda[k]);
    (out += ',') += num(log.energy[k]);
    for (const MomentumSeries& m : log.momenta) (out += ',') += num(m.values[k]);
    out += '\n';
  }
  return out;
}

void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto '" + target.string() + "'");
  }
}

std::string report_json(const CheckReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["overall_pass"] = report.overall_pass();
  j["samples"] = report.samples;
  j["timing_seconds"] = report.seconds;
  j["warnings"] = report.warnings;
  j["checks"] = json::array();
  for (const CheckResult& c : report.checks) {
    json e{{"name", c.name},
           {"measured", c.measured},
           {"tolerance", c.tolerance},
           {"pass", c.pass}};
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string invariants_json(const Scenario& scenario, const Trajectory& traj,
                            const InvariantLog& log) {
  json j;
  j["scenario"] = scenario.name;
  j["samples"] = traj.size();
  j["horizon"] = traj.times.empty() ? 0.0 : traj.times.back();
  j["energy"] = {{"initial", log.energy.front()},
                 {"final", log.energy.back()},
                 {"rescaled_drift", log.energy_drift}};
  j["lambda_final"] = log.lambda.back();
  j["momenta"] = json::array();
  for (const MomentumSeries& m : log.momenta) {
    j["momenta"].push_back({{"label", m.label},
                            {"initial", m.values.front()},
                            {"final", m.values.back()},
                            {"validated", m.validated},
                            {"max_symmetry_residual", m.max_symmetry_residual},
                            {"rescaled_drift", m.drift}});
  }
  j["laws"] = json::array();
  for (const ReferenceLaw& law : scenario.laws) {
    const double v = law.measure(traj, log);
    j["laws"].push_back({{"name", law.name},
                         {"measured", v},
                         {"tolerance", law.tolerance},
                         {"pass", v <= law.tolerance}});
  }
  return j.dump(2) + "\n";
}

int execute(RunConfig config, Mode mode, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  double fail_time = std::nan("");
  try {
    BuiltScenario built =
        build_scenario(config.scenario, config.params, config.horizon);
    for (const std::string& key : config.params.unused_keys()) {
      config.warnings.push_back("unknown key [scenario] " + key);
    }
    for (const std::string& w : config.warnings) err << "warning: " << w << "\n";

    std::vector<CheckSpec> specs = config.checks;
    if (specs.empty() && mode == Mode::verify) {
      specs = default_suite(built.scenario, built.wong.has_value());
    }
    for (const CheckSpec& c : specs) {
      if (c.name == "reduction_crosscheck" &&
          (!built.wong || built.wong->group != "u1")) {
        throw ConfigError(
            "reduction_crosscheck needs the wong scenario with group = u1");
      }
    }

    const Scenario& s = built.scenario;
    IntegratorConfig icfg = config.integrator;
    icfg.frozen_fiber = s.frozen_fiber;
    Trajectory traj;
    try {
      traj = integrate(s.chart, s.lagrangian, s.initial, s.horizon, icfg, s.name);
    } catch (const RegularityError& e) {
      fail_time = e.time();
      throw;
    }
    const InvariantLog log =
        build_invariant_log(s.chart, s.lagrangian, s.sections, traj);

    CheckReport report;
    report.scenario = s.name;
    report.samples = traj.size();
    report.warnings = config.warnings;
    report.checks =
        run_checks(config, s, built.wong, traj, log, specs, thread_cap());
    report.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();

    if (mode == Mode::run) {
      write_atomically(config.output_prefix + ".csv", trajectory_csv(traj, log));
      write_atomically(config.output_prefix + ".invariants.json",
                       invariants_json(s, traj, log));
    }
    write_atomically(config.output_prefix + ".report.json", report_json(report));

    for (const CheckResult& c : report.checks) {
      out << fmt::format("{:<26} {:<4} measured={:.3e} tol={:.1e}{}\n", c.name,
                         c.pass ? "PASS" : "FAIL", c.measured, c.tolerance,
                         c.note.empty() ? "" : "  (" + c.note + ")");
    }
    out << fmt::format("{}: {} samples, {}\n", s.name, traj.size(),
                       report.overall_pass() ? "all checks passed"
                                             : "some checks FAILED");
    return report.overall_pass() ? kPass : kCheckFailed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const herglotz::ArgumentError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const herglotz::Error& e) {
    err << "numeric error: " << e.what();
    if (!std::isnan(fail_time)) err << " [failure time t = " << fail_time << "]";
    err << "\n";
    return kNumericError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}

int list_scenarios(std::ostream& out) {
  for (const ScenarioInfo& s : available_scenarios()) {
    out << fmt::format("{:<15} {}\n", s.name, s.description);
  }
  return kPass;
}

}  // namespace herglotz::app
