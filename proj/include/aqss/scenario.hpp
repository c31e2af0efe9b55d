#pragma once

// Scenario files (JSON) and report serialization.
//
// {
//   "scheme": "cgl23" | {"t":2,"n":3,"secret_dim":3,"share_dim":3,"encoder":<matrix>},
//   "attack": {"family":"depolarizing","p":0.5,"shares":[1]}
//           | {"per_share":[{"family":"dephasing","p":0.5}, ...]}
//           | {"kraus":[<matrix>, ...]},
//   "solver": {"max_iters":5000,"tol":1e-6,"seesaw_tol":1e-3,"restarts":16,
//              "step_init":0.5,"seed":42},
//   "sets": "minimal" | "all"
// }
//
// Matrices are row-major arrays of rows; complex entries are [re, im] pairs
// (plain numbers are accepted as real entries).

#include <string>

#include <json.hpp>

#include "aqss/analysis.hpp"

namespace aqss {

inline constexpr const char* kToolVersion = "aqss 0.1.0";

// Thrown for malformed or invalid scenario content; `where` is a JSON path or
// a line/column position.
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(const std::string& where, const std::string& what)
      : std::invalid_argument(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct Scenario {
  nlohmann::json scheme_spec;  // normalized
  nlohmann::json attack_spec;  // normalized
  ThresholdScheme scheme;
  AttackModel attack;
  SolverConfig solver;
  SetPolicy sets = SetPolicy::Minimal;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& s);

// Copy with a named attack parameter replaced ("p" for family attacks).
// ScenarioError for unknown names.
Scenario with_parameter(const Scenario& s, const std::string& name, double value);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& where);

// Values in nats unless `bits`, which rescales capacities by 1/ln 2.
nlohmann::json report_to_json(const AnalysisReport& r, bool bits);
nlohmann::json theorem1_to_json(const Theorem1Report& t);

}  // namespace aqss
