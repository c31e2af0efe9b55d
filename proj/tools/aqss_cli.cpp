// aqss: analyze, verify and sweep threshold secret sharing scenarios.
//
//   aqss analyze <file> [--out <path>] [--sets minimal|all] [--seed N] [--bits]
//   aqss verify  <file> [--out <path>] [--sets minimal|all] [--seed N] [--bits]
//   aqss sweep   <file> --param <name> --grid v1,v2,... [--out <csv>]
//
// Exit codes: 0 success, 1 input error, 2 partial convergence (analyze) or
// failed checks (verify).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aqss/scenario.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kPartial = 2;

struct CommonOptions {
  std::string file;
  std::string out;
  std::string sets;
  std::optional<std::uint64_t> seed;
  bool bits = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

aqss::Scenario load(const CommonOptions& o) {
  aqss::Scenario s = aqss::load_scenario(o.file);
  if (o.seed) s.solver.seed = *o.seed;
  if (o.sets == "minimal") s.sets = aqss::SetPolicy::Minimal;
  if (o.sets == "all") s.sets = aqss::SetPolicy::All;
  return s;
}

void emit(const std::string& text, const std::string& out) {
  std::cout << text;
  if (out.empty()) return;
  std::ofstream f(out);
  if (!f) throw aqss::ScenarioError(out, "cannot open output file");
  f << text;
}

json envelope(const aqss::Scenario& s) {
  return {{"version", aqss::kToolVersion},
          {"generated_at", utc_timestamp()},
          {"seed", s.solver.seed},
          {"scenario", aqss::scenario_to_json(s)}};
}

int run_analyze(const CommonOptions& o) {
  const aqss::Scenario s = load(o);
  const aqss::AnalysisReport rep = aqss::analyze(s.scheme, s.attack, s.sets, s.solver);
  json doc = envelope(s);
  doc["report"] = aqss::report_to_json(rep, o.bits);
  emit(doc.dump(2) + "\n", o.out);
  return rep.converged ? kOk : kPartial;
}

int run_verify(const CommonOptions& o) {
  const aqss::Scenario s = load(o);
  const aqss::Thresholds th;
  const aqss::AnalysisReport rep = aqss::analyze(s.scheme, s.attack, s.sets, s.solver, th);
  const aqss::Theorem1Report t1 = aqss::verify_theorem1(rep, th);

  bool fvg_ok = true;
  json fvg = json::array();
  for (const auto& set : rep.sets) {
    const bool ok = set.error.empty() && set.fvg_lower_slack >= -th.fvg &&
                    set.fvg_upper_slack >= -th.fvg;
    fvg_ok = fvg_ok && ok;
    fvg.push_back({{"set", set.set.members},
                   {"lower_slack", set.fvg_lower_slack},
                   {"upper_slack", set.fvg_upper_slack},
                   {"pass", ok}});
  }
  const auto& res = rep.theorem1_residuals;
  const bool corollary_ok = res.at("corollary_margin") >= -th.corollary &&
                            res.at("c_minus_ctilde_min") >= -th.corollary;
  const bool pass = t1.pass && fvg_ok && corollary_ok;

  json doc = envelope(s);
  doc["report"] = aqss::report_to_json(rep, o.bits);
  doc["verification"] = {{"theorem1", aqss::theorem1_to_json(t1)},
                         {"fvg", fvg},
                         {"corollary", {{"margin", res.at("corollary_margin")},
                                        {"c_minus_ctilde_min", res.at("c_minus_ctilde_min")},
                                        {"pass", corollary_ok}}},
                         {"thresholds", {{"lemma2", th.lemma2},
                                         {"duality", th.duality},
                                         {"corollary", th.corollary},
                                         {"fvg", th.fvg}}},
                         {"pass", pass}};
  emit(doc.dump(2) + "\n", o.out);
  return pass ? kOk : kPartial;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v))
      throw aqss::ScenarioError("--grid", "not a number: '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw aqss::ScenarioError("--grid", "grid must be nonempty");
  std::sort(grid.begin(), grid.end());
  const auto last = std::unique(grid.begin(), grid.end());
  if (last != grid.end()) {
    std::cerr << "warning: removed " << std::distance(last, grid.end())
              << " duplicate grid value(s)\n";
    grid.erase(last, grid.end());
  }
  return grid;
}

int run_sweep(const std::string& file, const std::string& param, const std::string& grid_text,
              const std::string& out) {
  const aqss::Scenario base = aqss::load_scenario(file);
  const std::vector<double> grid = parse_grid(grid_text);
  std::vector<aqss::Scenario> points;
  for (double v : grid) points.push_back(aqss::with_parameter(base, param, v));

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << param << ",epsilon,ctilde,c,delta_lower,delta_upper\n";
  bool converged = true;
  double prev_eps = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const aqss::Scenario& s = points[i];
    const aqss::AnalysisReport rep =
        aqss::analyze(s.scheme, s.attack, s.sets, s.solver, {}, aqss::Depth::Dual);
    converged = converged && rep.converged;
    if (rep.epsilon_secrecy < prev_eps - 1e-6)
      std::cerr << "warning: epsilon decreases from " << prev_eps << " to "
                << rep.epsilon_secrecy << " at " << param << " = " << grid[i] << "\n";
    prev_eps = rep.epsilon_secrecy;
    csv << grid[i] << ',' << rep.epsilon_secrecy << ',' << rep.strength_ctilde << ','
        << rep.strength_c << ',' << rep.delta_bounds.first << ',' << rep.delta_bounds.second
        << '\n';
  }
  emit(csv.str(), out);
  return converged ? kOk : kPartial;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("file", o.file, "scenario file")->required();
  cmd->add_option("--out", o.out, "also write the report to this path");
  cmd->add_option("--sets", o.sets, "authorized sets to analyze")
      ->check(CLI::IsMember({"minimal", "all"}));
  cmd->add_option("--seed", o.seed, "override the solver seed");
  cmd->add_flag("--bits", o.bits, "report capacities in bits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate threshold quantum secret sharing analysis"};
  app.set_version_flag("--version", aqss::kToolVersion);
  app.require_subcommand(1);

  CommonOptions analyze_opts, verify_opts;
  CLI::App* analyze = app.add_subcommand("analyze", "full analysis report");
  add_common(analyze, analyze_opts);
  CLI::App* verify = app.add_subcommand("verify", "numerical certification of the equivalences");
  add_common(verify, verify_opts);

  std::string sweep_file, sweep_param, sweep_grid, sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "epsilon, capacities and diamond bracket per grid point");
  sweep->add_option("file", sweep_file, "scenario file")->required();
  sweep->add_option("--param", sweep_param, "attack parameter name")->required();
  sweep->add_option("--grid", sweep_grid, "comma-separated values")->required();
  sweep->add_option("--out", sweep_out, "also write the CSV table to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) return run_analyze(analyze_opts);
    if (*verify) return run_verify(verify_opts);
    return run_sweep(sweep_file, sweep_param, sweep_grid, sweep_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPartial;
  }
}
