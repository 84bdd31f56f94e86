#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "herglotz/invariants.hpp"
#include "herglotz/scenarios.hpp"

namespace herglotz::app {

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNumericError = 3,
  kIoError = 4,
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct CheckReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  std::size_t samples = 0;
  double seconds = 0.0;

  bool overall_pass() const noexcept;
};

/// Runs the requested checks against an integrated trajectory. Independent
/// checks run on up to `threads` workers; result order follows `specs`.
std::vector<CheckResult> run_checks(const RunConfig& config,
                                    const Scenario& scenario,
                                    const std::optional<WongParams>& wong,
                                    const Trajectory& trajectory,
                                    const InvariantLog& log,
                                    const std::vector<CheckSpec>& specs,
                                    unsigned threads);

// Every check that applies to the scenario, at default tolerances.
std::vector<CheckSpec> default_suite(const Scenario& scenario, bool has_wong);

// HERGLOTZ_THREADS when set to a positive integer, else hardware concurrency.
unsigned thread_cap();

// CSV: t, x_1..x_n, y_1..y_r, z, ell, lambda, E, J_<section>...
std::string trajectory_csv(const Trajectory& trajectory, const InvariantLog& log);

// Writes `contents` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& contents);

std::string report_json(const CheckReport& report);
std::string invariants_json(const Scenario& scenario, const Trajectory& traj,
                            const InvariantLog& log);

enum class Mode { run, verify };

/// Full command: build, integrate, check, write outputs. Maps every failure
/// to the exit-code contract and prints diagnostics to `err`.
int execute(RunConfig config, Mode mode, std::ostream& out, std::ostream& err);

int list_scenarios(std::ostream& out);

}  // namespace herglotz::app
