#include "aqss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace aqss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class F>
auto per_set(const std::vector<AuthorizedSet>& sets, F&& f) {
  using R = decltype(f(sets.front(), std::size_t{0}));
  std::vector<std::future<R>> futures;
  futures.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    futures.push_back(std::async(std::launch::async, [&, i] { return f(sets[i], i); }));
  std::vector<R> out;
  out.reserve(sets.size());
  for (auto& fu : futures) out.push_back(fu.get());
  return out;
}

void require_sets(const std::vector<AuthorizedSet>& sets) {
  if (sets.empty()) throw DomainError("no authorized sets to analyze");
}

double exp_neg(double c) { return std::isfinite(c) ? std::exp(-c) : 0.0; }

std::string describe(const ThresholdScheme& s) {
  std::ostringstream os;
  os << "((" << s.t() << "," << s.n() << ")) q=" << s.secret_dim() << " d=" << s.share_dim();
  return os.str();
}

}  // namespace

SolverConfig config_for_set(const SolverConfig& cfg, std::size_t index) {
  SolverConfig c = cfg;
  c.seed = splitmix64(cfg.seed ^ splitmix64(index + 1));
  return c;
}

std::vector<AuthorizedSet> select_sets(const ThresholdScheme& scheme, SetPolicy policy) {
  return policy == SetPolicy::Minimal ? min_authorized_sets(scheme) : all_authorized_sets(scheme);
}

std::pair<double, double> diamond_bounds(double eps_fid, double c) {
  if (!(eps_fid >= 0.0 && eps_fid <= 1.0))
    throw DomainError("diamond_bounds: fidelity parameter outside [0,1]");
  if (!(c >= 0.0)) throw DomainError("diamond_bounds: capacity must be nonnegative");
  const double cap = std::sqrt(std::max(0.0, 1.0 - exp_neg(c)));
  return {eps_fid, std::min(std::sqrt(eps_fid), cap)};
}

SetReport analyze_set(const ThresholdScheme& scheme, const AttackModel& attack,
                      const AuthorizedSet& a, const SolverConfig& cfg, Depth depth) {
  SetReport r;
  r.set = a;
  try {
    const EffectiveChannels eff = effective_channels(scheme, attack, a, cfg.tolerances);
    r.forward_rank = static_cast<int>(eff.forward.rank());
    r.environment_dim = static_cast<int>(eff.complement.dim_out());

    const RenyiHalfCapacity half = capacity_renyi_half(eff.complement, cfg);
    const double lower = half.saddle.maxmin_value;
    r.secrecy_fid = std::clamp(lower * lower, 0.0, 1.0);
    r.ctilde = half.value;
    r.saddle_gap = half.saddle.gap;
    r.lemma2_residual = std::abs(exp_neg(r.ctilde) - r.secrecy_fid);
    r.recon_fid_dual = r.secrecy_fid;

    const CapacityResult cea = capacity_ea(eff.complement, cfg);
    r.c_ea = cea.value;

    std::tie(r.diamond_lower, r.diamond_upper) = diamond_bounds(1.0 - r.secrecy_fid, r.c_ea);
    r.converged = half.saddle.converged && cea.converged;
    if (depth == Depth::Dual) return r;

    const RecoveryResult rec = optimize_recovery(eff.forward, cfg);
    r.recon_fid_primal = rec.fidelity;
    r.primal_dual_gap = std::abs(r.recon_fid_dual - r.recon_fid_primal);

    const FvgReport fvg = fvg_channel_check(compose(rec.recovery, eff.forward), cfg);
    r.diamond_estimate = fvg.distance;
    r.fvg_lower_slack = fvg.lower_slack;
    r.fvg_upper_slack = fvg.upper_slack;
    r.converged = r.converged && rec.converged;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.converged = false;
  }
  return r;
}

AnalysisReport analyze(const ThresholdScheme& scheme, const AttackModel& attack, SetPolicy policy,
                       const SolverConfig& cfg, const Thresholds& th, Depth depth) {
  validate(cfg);
  const std::vector<AuthorizedSet> sets = select_sets(scheme, policy);
  AnalysisReport rep;
  rep.scheme = describe(scheme);
  rep.attack = attack.label();
  rep.attack_parameters = attack.parameters();
  rep.sets = per_set(sets, [&](const AuthorizedSet& a, std::size_t i) {
    return analyze_set(scheme, attack, a, config_for_set(cfg, i), depth);
  });

  double min_fid = 1.0, min_primal = 1.0;
  bool ok = true;
  for (const auto& s : rep.sets) {
    ok = ok && s.converged && s.error.empty();
    if (!s.error.empty()) continue;
    min_fid = std::min(min_fid, s.secrecy_fid);
    min_primal = std::min(min_primal, s.recon_fid_primal);
    rep.strength_c = std::max(rep.strength_c, s.c_ea);
    rep.strength_ctilde = std::max(rep.strength_ctilde, s.ctilde);
  }
  rep.epsilon_secrecy = 1.0 - min_fid;
  rep.epsilon_recon = rep.epsilon_secrecy;
  rep.epsilon_recon_primal = 1.0 - min_primal;
  rep.delta_bounds = diamond_bounds(std::clamp(rep.epsilon_recon, 0.0, 1.0), rep.strength_c);

  const Theorem1Report t1 = verify_theorem1(rep, th);
  double corollary_margin = kInfinity, c_minus_ctilde = kInfinity;
  for (const auto& s : rep.sets) {
    if (!s.error.empty()) continue;
    corollary_margin = std::min(corollary_margin,
                                std::sqrt(std::max(0.0, 1.0 - exp_neg(rep.strength_c))) -
                                    s.diamond_estimate);
    c_minus_ctilde = std::min(c_minus_ctilde, s.c_ea - s.ctilde);
  }
  rep.theorem1_residuals = {
      {"lemma2_max", t1.max_lemma2_residual},
      {"duality_max", t1.max_duality_residual},
      {"epsilon_vs_ctilde", std::abs(rep.epsilon_secrecy - (1.0 - exp_neg(rep.strength_ctilde)))},
      {"corollary_margin", corollary_margin},
      {"c_minus_ctilde_min", c_minus_ctilde},
  };
  rep.converged = ok;
  return rep;
}

PerSetValues secrecy_epsilon(const ThresholdScheme& scheme, const AttackModel& attack,
                             const std::vector<AuthorizedSet>& sets, const SolverConfig& cfg) {
  require_sets(sets);
  validate(cfg);
  struct One {
    double fid;
    bool ok;
  };
  const auto vals = per_set(sets, [&](const AuthorizedSet& a, std::size_t i) {
    const SolverConfig c = config_for_set(cfg, i);
    const EffectiveChannels eff = effective_channels(scheme, attack, a, c.tolerances);
    const SaddleResult s = saddle_max_sigma_min_rho(kraus_to_choi(eff.complement), c);
    return One{std::clamp(s.maxmin_value * s.maxmin_value, 0.0, 1.0), s.converged};
  });
  PerSetValues out;
  double m = 1.0;
  for (const auto& v : vals) {
    out.values.push_back(v.fid);
    out.converged = out.converged && v.ok;
    m = std::min(m, v.fid);
  }
  out.epsilon = 1.0 - m;
  return out;
}

PerSetValues reconstructability_dual(const ThresholdScheme& scheme, const AttackModel& attack,
                                     const std::vector<AuthorizedSet>& sets,
                                     const SolverConfig& cfg) {
  return secrecy_epsilon(scheme, attack, sets, cfg);
}

PrimalValues reconstructability_primal(const ThresholdScheme& scheme, const AttackModel& attack,
                                       const std::vector<AuthorizedSet>& sets,
                                       const SolverConfig& cfg) {
  require_sets(sets);
  const PerSetValues dual = reconstructability_dual(scheme, attack, sets, cfg);
  struct One {
    double fid;
    bool ok;
  };
  const auto vals = per_set(sets, [&](const AuthorizedSet& a, std::size_t i) {
    const SolverConfig c = config_for_set(cfg, i);
    const EffectiveChannels eff = effective_channels(scheme, attack, a, c.tolerances);
    const RecoveryResult r = optimize_recovery(eff.forward, c);
    return One{r.fidelity, r.converged};
  });
  PrimalValues out;
  double m = 1.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out.values.push_back(vals[i].fid);
    out.residuals.push_back(std::abs(vals[i].fid - dual.values[i]));
    out.converged = out.converged && vals[i].ok;
    m = std::min(m, vals[i].fid);
  }
  out.epsilon = 1.0 - m;
  return out;
}

Strength adversary_strength(const ThresholdScheme& scheme, const AttackModel& attack,
                            const std::vector<AuthorizedSet>& sets, const SolverConfig& cfg) {
  require_sets(sets);
  validate(cfg);
  const auto vals = per_set(sets, [&](const AuthorizedSet& a, std::size_t i) {
    const SolverConfig c = config_for_set(cfg, i);
    const EffectiveChannels eff = effective_channels(scheme, attack, a, c.tolerances);
    return std::pair{capacity_ea(eff.complement, c).value,
                     capacity_renyi_half(eff.complement, c).value};
  });
  Strength s;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto [c, ct] = vals[i];
    if (c < ct - 1e-4) {
      std::ostringstream os;
      os << "set " << sets[i].to_string() << ": C = " << c << " below C~ = " << ct;
      throw DomainError(os.str());
    }
    s.c_per_set.push_back(c);
    s.ctilde_per_set.push_back(ct);
    s.c = std::max(s.c, c);
    s.ctilde = std::max(s.ctilde, ct);
  }
  return s;
}

Theorem1Report verify_theorem1(const AnalysisReport& report, const Thresholds& th) {
  Theorem1Report t;
  t.pass = !report.sets.empty();
  for (const auto& s : report.sets) {
    Theorem1Set e;
    e.set = s.set;
    e.error = s.error;
    if (s.error.empty()) {
      e.exp_minus_ctilde = exp_neg(s.ctilde);
      e.max_sigma_fidelity = s.secrecy_fid;
      e.primal_fidelity = s.recon_fid_primal;
      e.lemma2_residual = std::abs(e.exp_minus_ctilde - e.max_sigma_fidelity);
      e.duality_residual = std::abs(e.max_sigma_fidelity - e.primal_fidelity);
      e.pass = e.lemma2_residual <= th.lemma2 && e.duality_residual <= th.duality;
      t.max_lemma2_residual = std::max(t.max_lemma2_residual, e.lemma2_residual);
      t.max_duality_residual = std::max(t.max_duality_residual, e.duality_residual);
    }
    t.pass = t.pass && e.pass;
    t.sets.push_back(std::move(e));
  }
  return t;
}

Theorem1Report verify_theorem1(const ThresholdScheme& scheme, const AttackModel& attack,
                               const SolverConfig& cfg, const Thresholds& th) {
  return verify_theorem1(analyze(scheme, attack, SetPolicy::Minimal, cfg, th), th);
}

FvgReport fvg_channel_check(const KrausChannel& f, const SolverConfig& cfg, const Thresholds& th) {
  FvgReport r;
  r.fidelity = worst_case_input(f, cfg).fidelity;
  r.distance = diamond_distance_lower(f, cfg).value;
  r.lower_slack = r.fidelity - (1.0 - r.distance);
  r.upper_slack = (1.0 - r.distance * r.distance) - r.fidelity;
  r.pass = r.lower_slack >= -th.fvg && r.upper_slack >= -th.fvg;
  return r;
}

}  // namespace aqss
