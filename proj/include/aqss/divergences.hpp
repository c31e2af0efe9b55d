#pragma once

// Entropies, the sandwiched Renyi divergence, channel mutual informations and
// the two capacities (von Neumann and Renyi-1/2). All logarithms are natural.

#include <limits>

#include "aqss/channels.hpp"
#include "aqss/saddle.hpp"

namespace aqss {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const ComplexMatrix& rho);

// (1/(alpha-1)) log tr[(sigma^g rho sigma^g)^alpha], g = (1-alpha)/(2 alpha),
// powers of sigma on its support. Returns kInfinity when alpha > 1 and
// supp(rho) is not contained in supp(sigma), or when the trace vanishes.
// DomainError for alpha <= 0 or alpha == 1; ShapeError on dimension mismatch.
double sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha,
                        const Tolerances& tol = {});

// ||J^{1/2} (rho (x) sigma^{1/2})||_1.
double q_function(const DensityMatrix& rho, const DensityMatrix& sigma, const ChoiMatrix& j);

// tau = (1 (x) N)(psi psi^dagger) for the purification psi of rho, reference
// first: (sqrt(rho^T) (x) I) J (sqrt(rho^T) (x) I). Marginals rho^T and N(rho).
DensityMatrix channel_state(const KrausChannel& ch, const DensityMatrix& rho);

// S(rho) + S(N(rho)) - S(tau).
double mutual_info_vn(const KrausChannel& ch, const DensityMatrix& rho);

struct RenyiHalfInfo {
  double value = 0.0;  // -log max_sigma F(tau, rho^T (x) sigma)
  DensityMatrix sigma = DensityMatrix::maximally_mixed(1);
  double stationarity = 0.0;
  bool converged = false;
};

// The maximization over sigma uses q(rho^T, sigma)^2 = F(tau, rho^T (x) sigma).
RenyiHalfInfo mutual_info_renyi_half(const KrausChannel& ch, const DensityMatrix& rho,
                                     const SolverConfig& cfg = {});

struct CapacityResult {
  double value = 0.0;
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  // lambda_max of the gradient on the support of rho minus tr(G rho): an
  // upper bound on the optimality gap within that face.
  double certificate = 0.0;
  int restarts_used = 0;
  bool converged = false;
};

// max_rho I(X:Y) by BFGS on the concave objective.
CapacityResult capacity_ea(const KrausChannel& ch, const SolverConfig& cfg = {});

struct RenyiHalfCapacity {
  double value = 0.0;  // -log min_rho max_sigma q^2, from the rho-outer route
  // The saddle in kernel coordinates; the optimal channel input is rho_star^T.
  SaddleResult saddle;
  DensityMatrix input = DensityMatrix::maximally_mixed(1);
};

RenyiHalfCapacity capacity_renyi_half(const KrausChannel& ch, const SolverConfig& cfg = {});
RenyiHalfCapacity capacity_renyi_half(const ChoiMatrix& j, const SolverConfig& cfg = {});

}  // namespace aqss
