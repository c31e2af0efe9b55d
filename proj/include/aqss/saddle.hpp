#pragma once

// Optimization over (rho, sigma) for the q-function: the convex inner
// minimization over rho, the concave maximization over sigma and the
// max-min / min-max saddle with a two-route certificate.

#include "aqss/optim.hpp"
#include "aqss/qfunction.hpp"

namespace aqss {

struct MinRhoResult {
  double value = 0.0;  // min_rho q^2
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  double stationarity = 0.0;  // q - lambda_min(dq/drho) >= 0, a bound on the q suboptimality
  bool converged = false;
};

struct MaxSigmaResult {
  double value = 0.0;  // max_sigma q
  DensityMatrix sigma = DensityMatrix::maximally_mixed(1);
  double stationarity = 0.0;  // lambda_max(dq/dsigma) - q/2 >= 0
  bool converged = false;
};

struct SaddleResult {
  double value = 0.0;          // max_sigma min_rho q (lower route)
  double maxmin_value = 0.0;   // min_rho q(rho, sigma*) : lower bound on the saddle value
  double minmax_value = 0.0;   // max_sigma q(rho*, sigma) : upper bound
  DensityMatrix rho_star = DensityMatrix::maximally_mixed(1);
  DensityMatrix sigma_star = DensityMatrix::maximally_mixed(1);
  double gap = 0.0;  // minmax_value - maxmin_value
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

MinRhoResult min_rho_q(const DensityMatrix& sigma, const ChoiMatrix& j, const SolverConfig& cfg = {});
MaxSigmaResult maximize_sigma(const DensityMatrix& rho, const ChoiMatrix& j,
                              const SolverConfig& cfg = {});

// Outer BFGS on rho over h(rho) = max_sigma q (Danskin gradient), inner BFGS
// on sigma, then min over rho at the resulting sigma*. Random restarts
// (seeded per restart index) until the bracket closes to cfg.tol.
SaddleResult saddle_max_sigma_min_rho(const ChoiMatrix& j, const SolverConfig& cfg = {});

namespace detail {

struct SigmaOpt {
  double value;
  ComplexMatrix sigma;
  bool converged;
};
struct RhoOpt {
  double value;
  ComplexMatrix rho;
  bool converged;
};

SigmaOpt max_sigma(const QKernel& k, const ComplexMatrix& rho, const ComplexMatrix& start);
RhoOpt min_rho(const QKernel& k, const ComplexMatrix& sigma, const ComplexMatrix& start);
SaddleResult saddle(const QKernel& k, const SolverConfig& cfg);

// Frank-Wolfe style optimality residuals (see MinRhoResult / MaxSigmaResult).
double min_rho_stationarity(const QKernel& k, const ComplexMatrix& rho, const ComplexMatrix& sigma);
double max_sigma_stationarity(const QKernel& k, const ComplexMatrix& rho,
                              const ComplexMatrix& sigma);

}  // namespace detail

}  // namespace aqss
