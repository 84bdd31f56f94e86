#pragma once

#include <optional>
#include <string>

#include "config.hpp"
#include "herglotz/scenarios.hpp"

namespace herglotz::app {

struct BuiltScenario {
  Scenario scenario;
  // Set for wong runs; reduction_crosscheck re-integrates from these.
  std::optional<WongParams> wong;
};

/// Builds a named scenario from its [scenario] parameters. Unknown names and
/// invalid parameters throw ConfigError; `horizon` overrides the default.
BuiltScenario build_scenario(const std::string& name, ParamTable& params,
                             std::optional<double> horizon);

}  // namespace herglotz::app
