#include "aqss/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace aqss {

using nlohmann::json;

namespace {

const std::vector<std::string> kFamilies = {"identity", "depolarizing", "dephasing", "erasure"};

std::string at(const std::string& base, const std::string& key) { return base + "." + key; }
std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ScenarioError(where, "missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where, "expected a number");
  return j.get<double>();
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ScenarioError(where, "expected an integer");
  return j.get<long long>();
}

void only_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ScenarioError(at(where, it.key()), "unknown key");
}

// Wraps library exceptions with the scenario location that produced them.
template <class F>
auto located(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const NotCptpError& e) {
    std::ostringstream os;
    os << e.what() << " (trace-preservation residual " << e.tp_residual()
       << ", Choi minimum eigenvalue " << e.choi_min_eigenvalue() << ")";
    throw ScenarioError(where, os.str());
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(where, e.what());
  }
}

KrausChannel family_channel(const std::string& family, double p, Index d,
                            const std::string& where) {
  return located(where, [&] {
    if (family == "identity") return KrausChannel::identity(d);
    if (family == "depolarizing") return depolarizing(d, p);
    if (family == "dephasing") return dephasing(d, p);
    if (family == "erasure") return erasure(d, p);
    throw ScenarioError(where, "unknown attack family '" + family + "'");
  });
}

json normalize_scheme(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "cgl23")
      throw ScenarioError("scheme", "unknown builtin scheme '" + j.get<std::string>() + "'");
    return "cgl23";
  }
  if (!j.is_object()) throw ScenarioError("scheme", "expected a builtin name or an object");
  if (j.contains("builtin")) {
    only_keys(j, {"builtin"}, "scheme");
    return normalize_scheme(j.at("builtin"));
  }
  only_keys(j, {"t", "n", "secret_dim", "share_dim", "encoder"}, "scheme");
  json out;
  out["t"] = integer(require(j, "t", "scheme"), "scheme.t");
  out["n"] = integer(require(j, "n", "scheme"), "scheme.n");
  out["secret_dim"] = integer(require(j, "secret_dim", "scheme"), "scheme.secret_dim");
  out["share_dim"] = integer(require(j, "share_dim", "scheme"), "scheme.share_dim");
  out["encoder"] =
      matrix_to_json(matrix_from_json(require(j, "encoder", "scheme"), "scheme.encoder"));
  return out;
}

ThresholdScheme build_scheme(const json& spec) {
  if (spec.is_string()) return build_cgl_2_3_scheme();
  return located("scheme", [&] {
    const ComplexMatrix v = matrix_from_json(spec.at("encoder"), "scheme.encoder");
    const Index q = spec.at("secret_dim").get<Index>();
    return ThresholdScheme(spec.at("t").get<int>(), spec.at("n").get<int>(), q,
                           spec.at("share_dim").get<Index>(),
                           located("scheme.encoder", [&] {
                             if (v.cols() != q) throw ShapeError("encoder must have secret_dim columns");
                             return KrausChannel(q, v.rows(), {v});
                           }));
  });
}

json normalize_family(const json& j, const std::string& where, int n, bool allow_shares) {
  only_keys(j, allow_shares ? std::vector<std::string>{"family", "p", "shares"}
                            : std::vector<std::string>{"family", "p"},
            where);
  const json& fam = require(j, "family", where);
  if (!fam.is_string()) throw ScenarioError(at(where, "family"), "expected a string");
  const std::string f = fam.get<std::string>();
  if (std::find(kFamilies.begin(), kFamilies.end(), f) == kFamilies.end())
    throw ScenarioError(at(where, "family"), "unknown attack family '" + f + "'");
  json out;
  out["family"] = f;
  out["p"] = j.contains("p") ? number(j.at("p"), at(where, "p")) : 0.0;
  if (allow_shares) {
    std::vector<int> shares;
    if (j.contains("shares")) {
      const json& s = j.at("shares");
      if (!s.is_array() || s.empty())
        throw ScenarioError(at(where, "shares"), "expected a nonempty array of players");
      for (std::size_t i = 0; i < s.size(); ++i) {
        const long long v = integer(s[i], at(at(where, "shares"), i));
        if (v < 1 || v > n)
          throw ScenarioError(at(at(where, "shares"), i), "player outside 1.." + std::to_string(n));
        shares.push_back(static_cast<int>(v));
      }
      std::sort(shares.begin(), shares.end());
      shares.erase(std::unique(shares.begin(), shares.end()), shares.end());
    } else {
      for (int p = 1; p <= n; ++p) shares.push_back(p);
    }
    out["shares"] = shares;
  }
  return out;
}

json normalize_attack(const json& j, int n) {
  const std::string w = "attack";
  if (!j.is_object()) throw ScenarioError(w, "expected an object");
  if (j.contains("family")) return normalize_family(j, w, n, true);
  if (j.contains("per_share")) {
    only_keys(j, {"per_share"}, w);
    const json& list = j.at("per_share");
    if (!list.is_array()) throw ScenarioError(at(w, "per_share"), "expected an array");
    if (static_cast<int>(list.size()) != n)
      throw ScenarioError(at(w, "per_share"),
                          "expected " + std::to_string(n) + " entries, got " +
                              std::to_string(list.size()));
    json out;
    out["per_share"] = json::array();
    for (std::size_t i = 0; i < list.size(); ++i)
      out["per_share"].push_back(normalize_family(list[i], at(at(w, "per_share"), i), n, false));
    return out;
  }
  if (j.contains("kraus")) {
    only_keys(j, {"kraus", "label"}, w);
    const json& list = j.at("kraus");
    if (!list.is_array() || list.empty())
      throw ScenarioError(at(w, "kraus"), "expected a nonempty array of matrices");
    json out;
    out["kraus"] = json::array();
    for (std::size_t i = 0; i < list.size(); ++i)
      out["kraus"].push_back(matrix_to_json(matrix_from_json(list[i], at(at(w, "kraus"), i))));
    out["label"] = j.contains("label") && j.at("label").is_string() ? j.at("label") : json("explicit");
    return out;
  }
  throw ScenarioError(w, "expected one of 'family', 'per_share' or 'kraus'");
}

AttackModel build_attack(const json& spec, const ThresholdScheme& scheme) {
  const int n = scheme.n();
  const Index d = scheme.share_dim();
  if (spec.contains("family")) {
    const std::string f = spec.at("family");
    const double p = spec.at("p");
    const KrausChannel noisy = family_channel(f, p, d, "attack.p");
    std::vector<KrausChannel> per(n, KrausChannel::identity(d));
    for (int s : spec.at("shares").get<std::vector<int>>()) per[s - 1] = noisy;
    return product_attack(per, n, d, f, {{"p", p}});
  }
  if (spec.contains("per_share")) {
    std::vector<KrausChannel> per;
    std::map<std::string, double> params;
    std::string label = "per_share";
    for (std::size_t i = 0; i < spec.at("per_share").size(); ++i) {
      const json& e = spec.at("per_share")[i];
      per.push_back(family_channel(e.at("family"), e.at("p"), d,
                                   "attack.per_share[" + std::to_string(i) + "]"));
      params["p" + std::to_string(i + 1)] = e.at("p");
    }
    return product_attack(per, n, d, label, params);
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < spec.at("kraus").size(); ++i)
    ops.push_back(matrix_from_json(spec.at("kraus")[i], "attack.kraus[" + std::to_string(i) + "]"));
  const Index dim = scheme.share_space_dim();
  const CptpDiagnostics diag = located("attack.kraus", [&] { return validate_cptp(dim, dim, ops); });
  if (!diag.passed) {
    std::ostringstream os;
    os << "Kraus list is not CPTP (trace-preservation residual " << diag.tp_residual
       << ", Choi minimum eigenvalue " << diag.choi_min_eigenvalue << ")";
    throw ScenarioError("attack.kraus", os.str());
  }
  return AttackModel::global(KrausChannel(dim, dim, std::move(ops)), spec.at("label"));
}

SolverConfig parse_solver(const json& j) {
  SolverConfig c;
  if (j.is_null()) return c;
  const std::string w = "solver";
  if (!j.is_object()) throw ScenarioError(w, "expected an object");
  only_keys(j, {"max_iters", "tol", "seesaw_tol", "restarts", "step_init", "seed"}, w);
  if (j.contains("max_iters")) c.max_iters = static_cast<int>(integer(j["max_iters"], at(w, "max_iters")));
  if (j.contains("tol")) c.tol = number(j["tol"], at(w, "tol"));
  if (j.contains("seesaw_tol")) c.seesaw_tol = number(j["seesaw_tol"], at(w, "seesaw_tol"));
  if (j.contains("restarts")) c.restarts = static_cast<int>(integer(j["restarts"], at(w, "restarts")));
  if (j.contains("step_init")) c.step_init = number(j["step_init"], at(w, "step_init"));
  if (j.contains("seed")) {
    const json& seed = j["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0))
      throw ScenarioError(at(w, "seed"), "expected a nonnegative integer");
    c.seed = seed.get<std::uint64_t>();
  }
  located(w, [&] {
    validate(c);
    return 0;
  });
  return c;
}

json solver_to_json(const SolverConfig& c) {
  return {{"max_iters", c.max_iters}, {"tol", c.tol},         {"seesaw_tol", c.seesaw_tol},
          {"restarts", c.restarts},   {"step_init", c.step_init}, {"seed", c.seed}};
}

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? json("inf") : json("-inf");
}

}  // namespace

// --- matrices -------------------------------------------------------------

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ScenarioError(where, "expected a nonempty array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string wr = at(where, i);
    if (!j[i].is_array() || j[i].size() != cols)
      throw ScenarioError(wr, "expected a row of " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      const std::string we = at(wr, k);
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(number(e[0], we), number(e[1], we));
      } else {
        throw ScenarioError(we, "expected a number or a [re, im] pair");
      }
      if (!std::isfinite(m(i, k).real()) || !std::isfinite(m(i, k).imag()))
        throw ScenarioError(we, "non-finite entry");
    }
  }
  return m;
}

// --- scenarios ------------------------------------------------------------

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ScenarioError("scenario", "expected a JSON object");
  only_keys(j, {"scheme", "attack", "solver", "sets"}, "scenario");
  const json scheme_spec = normalize_scheme(require(j, "scheme", "scenario"));
  ThresholdScheme scheme = build_scheme(scheme_spec);
  const json attack_spec = normalize_attack(require(j, "attack", "scenario"), scheme.n());
  AttackModel attack = build_attack(attack_spec, scheme);
  SolverConfig solver = parse_solver(j.contains("solver") ? j.at("solver") : json());
  SetPolicy sets = SetPolicy::Minimal;
  if (j.contains("sets")) {
    const json& s = j.at("sets");
    if (s == "minimal") sets = SetPolicy::Minimal;
    else if (s == "all") sets = SetPolicy::All;
    else throw ScenarioError("sets", "expected \"minimal\" or \"all\"");
  }
  return Scenario{scheme_spec, attack_spec, std::move(scheme), std::move(attack), solver, sets};
}

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("line " + std::to_string(line) + ", column " + std::to_string(col),
                        std::string("JSON syntax error: ") + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_text(ss.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.where(),
                        std::string(e.what()).substr(e.where().size() + 2));
  }
}

json scenario_to_json(const Scenario& s) {
  return {{"scheme", s.scheme_spec},
          {"attack", s.attack_spec},
          {"solver", solver_to_json(s.solver)},
          {"sets", s.sets == SetPolicy::Minimal ? "minimal" : "all"}};
}

Scenario with_parameter(const Scenario& s, const std::string& name, double value) {
  if (!s.attack_spec.contains("family") || name != "p")
    throw ScenarioError("--param", "unknown parameter '" + name + "' for this attack");
  json spec = scenario_to_json(s);
  spec["attack"]["p"] = value;
  return parse_scenario(spec);
}

// --- reports --------------------------------------------------------------

json report_to_json(const AnalysisReport& r, bool bits) {
  const double unit = bits ? 1.0 / std::numbers::ln2 : 1.0;
  json sets = json::array();
  for (const auto& s : r.sets) {
    json e = {{"set", s.set.members},
              {"converged", s.converged},
              {"forward_kraus_rank", s.forward_rank},
              {"environment_dim", s.environment_dim}};
    if (!s.error.empty()) {
      e["error"] = s.error;
    } else {
      e["secrecy_fid"] = s.secrecy_fid;
      e["ctilde"] = number_json(s.ctilde * unit);
      e["c_ea"] = number_json(s.c_ea * unit);
      e["recon_fid_dual"] = s.recon_fid_dual;
      e["recon_fid_primal"] = s.recon_fid_primal;
      e["primal_dual_gap"] = s.primal_dual_gap;
      e["lemma2_residual"] = s.lemma2_residual;
      e["saddle_gap"] = s.saddle_gap;
      e["diamond_estimate"] = s.diamond_estimate;
      e["diamond_lower"] = s.diamond_lower;
      e["diamond_upper"] = s.diamond_upper;
      e["fvg_lower_slack"] = s.fvg_lower_slack;
      e["fvg_upper_slack"] = s.fvg_upper_slack;
    }
    sets.push_back(std::move(e));
  }
  json residuals = json::object();
  for (const auto& [k, v] : r.theorem1_residuals) residuals[k] = number_json(v);
  return {{"scheme", r.scheme},
          {"attack", {{"label", r.attack}, {"parameters", r.attack_parameters}}},
          {"units", bits ? "bits" : "nats"},
          {"sets", sets},
          {"epsilon_secrecy", r.epsilon_secrecy},
          {"epsilon_recon", r.epsilon_recon},
          {"epsilon_recon_primal", r.epsilon_recon_primal},
          {"strength_C", number_json(r.strength_c * unit)},
          {"strength_Ctilde", number_json(r.strength_ctilde * unit)},
          {"delta_bounds", {r.delta_bounds.first, r.delta_bounds.second}},
          {"theorem1_residuals", residuals},
          {"converged", r.converged}};
}

json theorem1_to_json(const Theorem1Report& t) {
  json sets = json::array();
  for (const auto& s : t.sets) {
    json e = {{"set", s.set.members}, {"pass", s.pass}};
    if (!s.error.empty()) {
      e["error"] = s.error;
    } else {
      e["exp_minus_ctilde"] = s.exp_minus_ctilde;
      e["max_sigma_fidelity"] = s.max_sigma_fidelity;
      e["primal_fidelity"] = s.primal_fidelity;
      e["lemma2_residual"] = s.lemma2_residual;
      e["duality_residual"] = s.duality_residual;
    }
    sets.push_back(std::move(e));
  }
  return {{"sets", sets},
          {"max_lemma2_residual", t.max_lemma2_residual},
          {"max_duality_residual", t.max_duality_residual},
          {"pass", t.pass}};
}

}  // namespace aqss
