#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "raid/experiments.hpp"

namespace raid {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A validated simulation scenario. `echo` is the normalized document that
// parse_scenario(serialize(...)) reproduces byte-for-byte; it is embedded in
// output manifests for provenance.
struct Scenario {
  MonteCarloConfig mc;
  std::pair<double, double> rate_window{0.0, 0.0};
  nlohmann::json echo;
};

// Parses and validates a scenario document. Throws ScenarioError with the
// offending field path; violations of the interiority or admissibility
// requirements name the violated assumption.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);

nlohmann::json serialize(const Scenario& s);

std::string noise_kind_name(NoiseKind kind);
NoiseKind noise_kind_from(const std::string& name);

}  // namespace raid
