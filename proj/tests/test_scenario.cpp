#include <doctest.h>

#include "aqss/scenario.hpp"
#include "support.hpp"

using namespace aqss;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("builtin scenarios parse") {
  const Scenario s = parse_scenario_text(R"({"scheme":"cgl23","attack":{"family":"identity"}})");
  CHECK(s.scheme.n() == 3);
  CHECK(s.sets == SetPolicy::Minimal);
  CHECK(s.solver.seed == 42);
  CHECK(s.attack.is_product());

  const Scenario t = parse_scenario_text(R"({
    "scheme": {"builtin": "cgl23"},
    "attack": {"family": "depolarizing", "p": 0.25, "shares": [2, 2]},
    "solver": {"seed": 7, "restarts": 4},
    "sets": "all"})");
  CHECK(t.solver.seed == 7);
  CHECK(t.solver.restarts == 4);
  CHECK(t.sets == SetPolicy::All);
  CHECK(t.attack_spec["shares"] == json::array({2}));
  CHECK(t.attack.parameters().at("p") == 0.25);
}

TEST_CASE("diagnostics") {
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"depolarizing","p":2}})")
            .find("parameter out of range [0,1]") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"bitflip"}})").find("attack.family") !=
        std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"identity"},"extra":1})")
            .find("scenario.extra") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23"})").find("missing key 'attack'") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"per_share":[{"family":"identity"}]}})")
            .find("expected 3 entries") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"identity","shares":[4]}})")
            .find("attack.shares[0]") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"identity"},"solver":{"tol":-1}})")
            .find("solver") != std::string::npos);
  CHECK(error_of(R"({"scheme":"cgl23","attack":{"family":"identity"},"sets":"some"})")
            .find("sets") != std::string::npos);

  const std::string syntax = error_of("{\n  \"scheme\": \"cgl23\",\n  \"attack\": {,}\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK(syntax.find("JSON syntax error") != std::string::npos);
}

TEST_CASE("explicit Kraus attacks are validated") {
  const ComplexMatrix big = 1.01 * ComplexMatrix::Identity(27, 27);
  json j = {{"scheme", "cgl23"}, {"attack", {{"kraus", json::array({matrix_to_json(big)})}}}};
  try {
    parse_scenario(j);
    FAIL("expected a ScenarioError");
  } catch (const ScenarioError& e) {
    const std::string w = e.what();
    CHECK(w.find("attack.kraus") != std::string::npos);
    CHECK(w.find("trace-preservation residual") != std::string::npos);
    CHECK(w.find("Choi minimum eigenvalue") != std::string::npos);
  }
  j["attack"]["kraus"] = json::array({matrix_to_json(ComplexMatrix::Identity(27, 27))});
  const Scenario s = parse_scenario(j);
  CHECK_FALSE(s.attack.is_product());
  CHECK(s.attack.label() == "explicit");
}

TEST_CASE("explicit encoders are validated") {
  const ComplexMatrix v = build_cgl_2_3_scheme().isometry();
  json j = {{"scheme",
             {{"t", 2}, {"n", 3}, {"secret_dim", 3}, {"share_dim", 3}, {"encoder", matrix_to_json(v)}}},
            {"attack", {{"family", "identity"}}}};
  CHECK_NOTHROW(parse_scenario(j));
  j["scheme"]["encoder"] = matrix_to_json(1.1 * v);
  CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
  j["scheme"]["encoder"] = matrix_to_json(v.leftCols(2));
  CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(70);
  const ComplexMatrix u = aqss::testing::random_unitary(27, rng);
  const json j = {{"scheme", "cgl23"},
                  {"attack", {{"kraus", json::array({matrix_to_json(u)})}, {"label", "rotation"}}},
                  {"solver", {{"seed", 3}}},
                  {"sets", "all"}};
  const Scenario s = parse_scenario(j);
  const Scenario back = parse_scenario(json::parse(scenario_to_json(s).dump()));
  CHECK(scenario_to_json(back) == scenario_to_json(s));
  const ComplexMatrix u2 = back.attack.channel().kraus_ops()[0];
  CHECK((u2 - u).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(back.attack.label() == "rotation");
  CHECK(back.sets == SetPolicy::All);

  const ComplexMatrix m = matrix_from_json(json::parse("[[1, [0, 2]], [[3, -1], 0.5]]"), "m");
  CHECK(m(0, 1) == Complex(0, 2));
  CHECK(m(1, 0) == Complex(3, -1));
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]"), "m"), ScenarioError);
}

TEST_CASE("with_parameter") {
  const Scenario s = parse_scenario_text(
      R"({"scheme":"cgl23","attack":{"family":"dephasing","p":0.1,"shares":[1]}})");
  const Scenario t = with_parameter(s, "p", 0.7);
  CHECK(t.attack.parameters().at("p") == 0.7);
  CHECK(t.attack_spec["shares"] == json::array({1}));
  CHECK_THROWS_AS(with_parameter(s, "q", 0.5), ScenarioError);
  CHECK_THROWS_AS(with_parameter(s, "p", 1.5), ScenarioError);
}

TEST_CASE("report serialization") {
  AnalysisReport r;
  r.scheme = "x";
  r.attack = "y";
  r.strength_c = std::log(2.0);
  r.strength_ctilde = kInfinity;
  r.theorem1_residuals = {{"corollary_margin", kInfinity}};
  const json nats = report_to_json(r, false);
  const json bits = report_to_json(r, true);
  CHECK(nats["units"] == "nats");
  CHECK(bits["strength_C"].get<double>() == doctest::Approx(1.0));
  CHECK(bits["strength_Ctilde"] == "inf");
  CHECK(nats["theorem1_residuals"]["corollary_margin"] == "inf");
}
