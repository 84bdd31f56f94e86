#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "herglotz/dynamics.hpp"

namespace herglotz::app {

// Malformed, incomplete or out-of-domain configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario parameter table. Values are kept as text and converted on
/// request; keys that are never read are reported as unknown.
class ParamTable {
 public:
  void set(const std::string& key, std::string value, int line);
  bool has(const std::string& key) const;

  double number(const std::string& key, double fallback);
  long integer(const std::string& key, long fallback);
  std::string text(const std::string& key, const std::string& fallback);
  Vector vector(const std::string& key, const Vector& fallback);

  std::vector<std::string> unused_keys() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };
  Entry* find(const std::string& key);
  std::map<std::string, Entry> entries_;
};

// Unreadable input or unwritable output (exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  std::string name;
  double tolerance = 0.0;
};

struct RunConfig {
  std::string scenario;
  ParamTable params;
  IntegratorConfig integrator;
  std::optional<double> horizon;  // scenario default when unset
  std::string output_prefix = "herglotz_run";
  std::uint64_t seed = 42;
  int random_connections = 5;
  std::vector<CheckSpec> checks;
  std::vector<std::string> warnings;
};

/// Parses the INI-like config format:
///
///   # comment
///   [scenario]     name = rigid_body, then scenario parameters
///   [integrator]   method, step, rel_tol, abs_tol, max_steps
///   [run]          horizon, output_prefix, seed, random_connections
///   [checks]       <check name> = <tolerance>   (empty value: default)
///
/// Vector values are comma or space separated. Unknown keys and sections
/// become warnings. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

const std::vector<std::string>& known_checks();
double default_tolerance(const std::string& check);

}  // namespace herglotz::app
