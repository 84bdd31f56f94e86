#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz::app {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

double parse_number(const std::string& text, const std::string& key, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(where(line) + "'" + key + "' expects a number, got '" +
                      text + "'");
  }
  return v;
}

long parse_integer(const std::string& text, const std::string& key, int line) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where(line) + "'" + key + "' expects an integer, got '" +
                      text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

void ParamTable::set(const std::string& key, std::string value, int line) {
  entries_[key] = Entry{std::move(value), line, false};
}

bool ParamTable::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

ParamTable::Entry* ParamTable::find(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

double ParamTable::number(const std::string& key, double fallback) {
  Entry* e = find(key);
  return e ? parse_number(e->value, key, e->line) : fallback;
}

long ParamTable::integer(const std::string& key, long fallback) {
  Entry* e = find(key);
  return e ? parse_integer(e->value, key, e->line) : fallback;
}

std::string ParamTable::text(const std::string& key,
                             const std::string& fallback) {
  Entry* e = find(key);
  return e ? e->value : fallback;
}

Vector ParamTable::vector(const std::string& key, const Vector& fallback) {
  Entry* e = find(key);
  if (!e) return fallback;
  const auto parts = split_list(e->value);
  if (parts.empty()) {
    throw ConfigError(where(e->line) + "'" + key + "' is empty");
  }
  Vector v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Index>(i)] = parse_number(parts[i], key, e->line);
  }
  return v;
}

std::vector<std::string> ParamTable::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, e] : entries_) {
    if (!e.used) out.push_back(k);
  }
  return out;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "elh_residual",       "energy_balance",
      "noether_drift",      "intrinsic_residual",
      "connection_independence", "hph_residuals",
      "reduction_crosscheck",    "algebroid_identities",
      "energy_decay",       "reference_laws",
  };
  return names;
}

double default_tolerance(const std::string& check) {
  if (check == "connection_independence") return 1e-9;
  if (check == "noether_drift") return 1e-6;
  if (check == "energy_balance") return 1e-6;
  if (check == "algebroid_identities") return 1e-6;
  if (check == "energy_decay") return 1e-6;
  if (check == "reference_laws") return 0.0;  // each law has its own
  return 1e-5;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string section;
  std::string raw;
  int line = 0;
  bool have_name = false;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos
                                   ? std::string_view(raw)
                                   : std::string_view(raw).substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where(line) + "unterminated section");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section != "scenario" && section != "integrator" && section != "run" &&
          section != "checks") {
        cfg.warnings.push_back(where(line) + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where(line) + "expected 'key = value', got '" + s + "'");
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError(where(line) + "empty key");
    if (section.empty()) {
      throw ConfigError(where(line) + "'" + key + "' appears before any section");
    }

    if (section == "scenario") {
      if (key == "name") {
        cfg.scenario = value;
        have_name = true;
      } else {
        cfg.params.set(key, value, line);
      }
    } else if (section == "integrator") {
      if (key == "method") {
        if (value == "rk4") {
          cfg.integrator.method = Method::rk4;
        } else if (value == "rk45_adaptive") {
          cfg.integrator.method = Method::rk45_adaptive;
        } else {
          throw ConfigError(where(line) + "unknown method '" + value +
                            "' (rk4 or rk45_adaptive)");
        }
      } else if (key == "step") {
        cfg.integrator.step = parse_number(value, key, line);
      } else if (key == "rel_tol") {
        cfg.integrator.rel_tol = parse_number(value, key, line);
      } else if (key == "abs_tol") {
        cfg.integrator.abs_tol = parse_number(value, key, line);
      } else if (key == "max_steps") {
        const long m = parse_integer(value, key, line);
        if (m <= 0) throw ConfigError(where(line) + "max_steps must be > 0");
        cfg.integrator.max_steps = static_cast<std::size_t>(m);
      } else {
        cfg.warnings.push_back(where(line) + "unknown key [integrator] " + key);
      }
    } else if (section == "run") {
      if (key == "horizon") {
        cfg.horizon = parse_number(value, key, line);
      } else if (key == "output_prefix") {
        if (value.empty()) throw ConfigError(where(line) + "empty output_prefix");
        cfg.output_prefix = value;
      } else if (key == "seed") {
        const long seed = parse_integer(value, key, line);
        if (seed < 0) throw ConfigError(where(line) + "seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(seed);
      } else if (key == "random_connections") {
        const long k = parse_integer(value, key, line);
        if (k < 1) throw ConfigError(where(line) + "random_connections must be >= 1");
        cfg.random_connections = static_cast<int>(k);
      } else {
        cfg.warnings.push_back(where(line) + "unknown key [run] " + key);
      }
    } else if (section == "checks") {
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ConfigError(where(line) + "unknown check '" + key + "'");
      }
      const double tol =
          value.empty() ? default_tolerance(key) : parse_number(value, key, line);
      if (tol < 0.0) throw ConfigError(where(line) + "negative tolerance");
      cfg.checks.push_back({key, tol});
    } else {
      cfg.warnings.push_back(where(line) + "ignored key '" + key + "' in [" +
                             section + "]");
    }
  }

  if (!have_name || cfg.scenario.empty()) {
    throw ConfigError("missing required parameter [scenario] name");
  }
  if (cfg.horizon && !(*cfg.horizon > 0.0)) {
    throw ConfigError("horizon must be > 0");
  }
  try {
    cfg.integrator.validate();
  } catch (const herglotz::ArgumentError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace herglotz::app
