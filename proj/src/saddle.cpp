#include "aqss/saddle.hpp"

#include <sstream>

namespace aqss {

namespace {

MinimizeOptions inner_options() {
  MinimizeOptions o;
  o.max_iters = 1000;
  o.gradient_tol = 1e-12;
  return o;
}

MinimizeOptions outer_options(const SolverConfig& cfg) {
  MinimizeOptions o;
  o.max_iters = std::min(cfg.max_iters, 500);
  o.gradient_tol = 1e-11;
  return o;
}

ComplexMatrix mixed(Index d) {
  return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
}

DensityMatrix as_density(const ComplexMatrix& m) { return density_project(HermitianOperator(m)); }

double lambda_min(const ComplexMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double lambda_max(const ComplexMatrix& h) {
  const auto es = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

void check_dims(const ChoiMatrix& j, Index din, Index dout) {
  if ((din >= 0 && din != j.dim_in()) || (dout >= 0 && dout != j.dim_out()))
    throw ShapeError("state dimension does not match the channel");
}

}  // namespace

namespace detail {

SigmaOpt max_sigma(const QKernel& k, const ComplexMatrix& rho, const ComplexMatrix& start) {
  const DensityObjective f = [&](const ComplexMatrix& sigma, ComplexMatrix* g) {
    const double v = k.grad_sigma(rho, sigma, g);
    if (g) *g = -*g;
    return -v;
  };
  DensityMinResult r = minimize_over_densities(f, start, inner_options());
  return {-r.value, std::move(r.rho), r.converged};
}

RhoOpt min_rho(const QKernel& k, const ComplexMatrix& sigma, const ComplexMatrix& start) {
  const DensityObjective f = [&](const ComplexMatrix& rho, ComplexMatrix* g) {
    return k.grad_rho(rho, sigma, g);
  };
  DensityMinResult r = minimize_over_densities(f, start, inner_options());
  return {r.value, std::move(r.rho), r.converged};
}

double min_rho_stationarity(const QKernel& k, const ComplexMatrix& rho,
                            const ComplexMatrix& sigma) {
  ComplexMatrix g;
  const double q = k.grad_rho(rho, sigma, &g);
  return std::max(0.0, q - lambda_min(g));
}

double max_sigma_stationarity(const QKernel& k, const ComplexMatrix& rho,
                              const ComplexMatrix& sigma) {
  ComplexMatrix g;
  const double q = k.grad_sigma(rho, sigma, &g);
  return std::max(0.0, lambda_max(g) - 0.5 * q);
}

SaddleResult saddle(const QKernel& k, const SolverConfig& cfg) {
  validate(cfg);
  const Index din = k.dim_in(), dout = k.dim_out();
  double best_lower = -1.0, best_upper = std::numeric_limits<double>::infinity();
  ComplexMatrix best_rho = mixed(din), best_sigma = mixed(dout);
  SaddleResult out;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    ComplexMatrix rho0 = mixed(din);
    if (restart > 0) {
      auto rng = task_rng(cfg.seed, static_cast<std::uint64_t>(restart));
      rho0 = factor::density(factor::random(din, rng));
    }

    // Outer problem: minimize h(rho) = max_sigma q(rho, sigma).
    ComplexMatrix warm = mixed(dout);
    const DensityObjective h = [&](const ComplexMatrix& rho, ComplexMatrix* g) {
      SigmaOpt s = max_sigma(k, rho, warm);
      warm = s.sigma;
      if (g) k.grad_rho(rho, s.sigma, g);
      return s.value;
    };
    DensityMinResult outer = minimize_over_densities(h, rho0, outer_options(cfg));
    out.iterations += outer.iterations;

    const SigmaOpt top = max_sigma(k, outer.rho, warm);
    const RhoOpt bottom = min_rho(k, top.sigma, outer.rho);

    if (top.value < best_upper) {
      best_upper = top.value;
      best_rho = outer.rho;
    }
    if (bottom.value > best_lower) {
      best_lower = bottom.value;
      best_sigma = top.sigma;
    }
    out.restarts_used = restart + 1;
    if (best_upper - best_lower <= cfg.tol) break;
  }

  out.maxmin_value = best_lower;
  out.minmax_value = best_upper;
  out.value = best_lower;
  out.gap = std::max(0.0, best_upper - best_lower);
  out.rho_star = as_density(best_rho);
  out.sigma_star = as_density(best_sigma);
  out.converged = out.gap <= cfg.tol;
  return out;
}

}  // namespace detail

MinRhoResult min_rho_q(const DensityMatrix& sigma, const ChoiMatrix& j, const SolverConfig& cfg) {
  validate(cfg);
  check_dims(j, -1, sigma.dim());
  const QKernel k(j, cfg.tolerances);
  MinRhoResult best;
  double best_q = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    ComplexMatrix start = mixed(j.dim_in());
    if (restart > 0) {
      auto rng = task_rng(cfg.seed, static_cast<std::uint64_t>(restart));
      start = factor::density(factor::random(j.dim_in(), rng));
    }
    const detail::RhoOpt r = detail::min_rho(k, sigma.matrix(), start);
    if (r.value < best_q) {
      best_q = r.value;
      best.rho = as_density(r.rho);
      best.stationarity = detail::min_rho_stationarity(k, r.rho, sigma.matrix());
    }
    if (best.stationarity <= cfg.tol) break;
  }
  best.value = best_q * best_q;
  best.converged = best.stationarity <= cfg.tol;
  return best;
}

MaxSigmaResult maximize_sigma(const DensityMatrix& rho, const ChoiMatrix& j,
                              const SolverConfig& cfg) {
  validate(cfg);
  check_dims(j, rho.dim(), -1);
  const QKernel k(j, cfg.tolerances);
  MaxSigmaResult best;
  double best_q = -1.0;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    ComplexMatrix start = mixed(j.dim_out());
    if (restart > 0) {
      auto rng = task_rng(cfg.seed, static_cast<std::uint64_t>(restart));
      start = factor::density(factor::random(j.dim_out(), rng));
    }
    const detail::SigmaOpt s = detail::max_sigma(k, rho.matrix(), start);
    if (s.value > best_q) {
      best_q = s.value;
      best.sigma = as_density(s.sigma);
      best.stationarity = detail::max_sigma_stationarity(k, rho.matrix(), s.sigma);
    }
    if (best.stationarity <= cfg.tol) break;
  }
  best.value = best_q;
  best.converged = best.stationarity <= cfg.tol;
  return best;
}

SaddleResult saddle_max_sigma_min_rho(const ChoiMatrix& j, const SolverConfig& cfg) {
  return detail::saddle(QKernel(j, cfg.tolerances), cfg);
}

}  // namespace aqss
