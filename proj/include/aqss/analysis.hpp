#pragma once

// Scheme-level quantities: secrecy and reconstructability parameters, the
// adversary strengths C and C~, diamond-distance brackets and the numerical
// checks that tie them together.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aqss/divergences.hpp"
#include "aqss/recovery.hpp"
#include "aqss/scheme.hpp"

namespace aqss {

enum class SetPolicy { Minimal, All };

// Dual skips the recovery optimization and the diamond estimate; primal and
// FvG fields are then left at zero.
enum class Depth { Full, Dual };

struct Thresholds {
  double lemma2 = 2e-5;    // |exp(-C~) - max_sigma F|
  double duality = 5e-3;   // |dual - primal| recovery fidelity
  double corollary = 1e-4; // slack on D <= sqrt(1 - exp(-C)) and C >= C~
  double fvg = 1e-6;       // slack in the Fuchs-van de Graaf chain
};

struct SetReport {
  AuthorizedSet set;
  double secrecy_fid = 0.0;       // max_sigma min_rho q^2 on the complement
  double ctilde = 0.0;            // -log min_rho max_sigma q^2
  double c_ea = 0.0;              // entanglement-assisted capacity of the complement
  double recon_fid_dual = 0.0;    // equals secrecy_fid
  double recon_fid_primal = 0.0;  // F_diamond(R* o N, id) for the recovered R*
  double primal_dual_gap = 0.0;   // |recon_fid_dual - recon_fid_primal|
  double lemma2_residual = 0.0;   // |exp(-ctilde) - secrecy_fid|
  double saddle_gap = 0.0;
  double diamond_estimate = 0.0;  // heuristic D_diamond(R* o N, id), a lower estimate
  double diamond_lower = 0.0;     // bracket on the best achievable diamond distance
  double diamond_upper = 0.0;
  double fvg_lower_slack = 0.0;   // F - (1 - D) for R* o N
  double fvg_upper_slack = 0.0;   // (1 - D^2) - F for R* o N
  int forward_rank = 0;
  int environment_dim = 0;
  bool converged = false;
  std::string error;  // nonempty when a subsolver threw
};

struct AnalysisReport {
  std::string scheme;
  std::string attack;
  std::map<std::string, double> attack_parameters;
  std::vector<SetReport> sets;
  double epsilon_secrecy = 0.0;
  double epsilon_recon = 0.0;         // dual route, identical to epsilon_secrecy
  double epsilon_recon_primal = 0.0;
  double strength_c = 0.0;
  double strength_ctilde = 0.0;
  std::pair<double, double> delta_bounds{0.0, 0.0};
  std::map<std::string, double> theorem1_residuals;
  bool converged = false;
};

// Per-set configuration: seed mixed with the set index.
SolverConfig config_for_set(const SolverConfig& cfg, std::size_t index);

std::vector<AuthorizedSet> select_sets(const ThresholdScheme& scheme, SetPolicy policy);

// Full per-set analysis (every quantity in SetReport).
SetReport analyze_set(const ThresholdScheme& scheme, const AttackModel& attack,
                      const AuthorizedSet& a, const SolverConfig& cfg, Depth depth = Depth::Full);

// All sets in parallel, then the folds over sets.
AnalysisReport analyze(const ThresholdScheme& scheme, const AttackModel& attack, SetPolicy policy,
                       const SolverConfig& cfg = {}, const Thresholds& th = {},
                       Depth depth = Depth::Full);

struct PerSetValues {
  double epsilon = 0.0;
  std::vector<double> values;
  bool converged = true;
};

// epsilon = 1 - min over sets of max_sigma F_diamond(N^_A, V_sigma).
PerSetValues secrecy_epsilon(const ThresholdScheme& scheme, const AttackModel& attack,
                             const std::vector<AuthorizedSet>& sets, const SolverConfig& cfg = {});
// Same computation, reported as the dual certificate for reconstruction.
PerSetValues reconstructability_dual(const ThresholdScheme& scheme, const AttackModel& attack,
                                     const std::vector<AuthorizedSet>& sets,
                                     const SolverConfig& cfg = {});

struct PrimalValues {
  double epsilon = 0.0;
  std::vector<double> values;     // primal recovery fidelities
  std::vector<double> residuals;  // |primal - dual| per set
  bool converged = true;
};
PrimalValues reconstructability_primal(const ThresholdScheme& scheme, const AttackModel& attack,
                                       const std::vector<AuthorizedSet>& sets,
                                       const SolverConfig& cfg = {});

struct Strength {
  double c = 0.0;
  double ctilde = 0.0;
  std::vector<double> c_per_set;
  std::vector<double> ctilde_per_set;
};
// DomainError if C < C~ - 1e-4 on some set.
Strength adversary_strength(const ThresholdScheme& scheme, const AttackModel& attack,
                            const std::vector<AuthorizedSet>& sets, const SolverConfig& cfg = {});

// (eps, min(sqrt(eps), sqrt(1 - exp(-C)))); C may be +infinity. DomainError
// for eps outside [0, 1] or C < 0.
std::pair<double, double> diamond_bounds(double eps_fid, double c);

struct Theorem1Set {
  AuthorizedSet set;
  double exp_minus_ctilde = 0.0;
  double max_sigma_fidelity = 0.0;
  double primal_fidelity = 0.0;
  double lemma2_residual = 0.0;
  double duality_residual = 0.0;
  bool pass = false;
  std::string error;
};

struct Theorem1Report {
  std::vector<Theorem1Set> sets;
  double max_lemma2_residual = 0.0;
  double max_duality_residual = 0.0;
  bool pass = false;
};

Theorem1Report verify_theorem1(const ThresholdScheme& scheme, const AttackModel& attack,
                               const SolverConfig& cfg = {}, const Thresholds& th = {});
Theorem1Report verify_theorem1(const AnalysisReport& report, const Thresholds& th = {});

struct FvgReport {
  double fidelity = 1.0;  // F_diamond(F, id)
  double distance = 0.0;  // heuristic D_diamond(F, id)
  double lower_slack = 0.0;  // F - (1 - D), >= 0 expected
  double upper_slack = 0.0;  // (1 - D^2) - F, >= 0 expected
  bool pass = false;
};

// 1 - D <= F <= 1 - D^2 with both sides estimated. F comes from an exact
// convex program and D from local search started at the worst-fidelity
// input, so a violation beyond th.fvg indicates a defect, not noise.
FvgReport fvg_channel_check(const KrausChannel& f, const SolverConfig& cfg = {},
                            const Thresholds& th = {});

}  // namespace aqss
