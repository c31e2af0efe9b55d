#pragma once

// Smooth unconstrained minimization (Ceres line-search BFGS) and the
// factorized parametrization rho = A A^dagger / ||A||_F^2 that turns
// optimization over density matrices into an unconstrained problem.

#include <cstdint>
#include <functional>
#include <random>

#include "aqss/numkernel.hpp"

namespace aqss {

struct SolverConfig {
  int max_iters = 5000;
  double tol = 1e-6;          // duality gap / stationarity
  double seesaw_tol = 1e-3;   // stopping tolerance of the primal recovery loop
  int restarts = 16;
  double step_init = 0.5;     // extragradient step of the recovery solver
  std::uint64_t seed = 42;
  Tolerances tolerances{};
};

// Validates tol > 0, restarts >= 1, max_iters >= 1, step_init > 0.
void validate(const SolverConfig& cfg);

// Deterministic stream for (seed, task index).
std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t index);

struct MinimizeOptions {
  int max_iters = 2000;
  double gradient_tol = 1e-12;
  double function_tol = 1e-15;
  double parameter_tol = 1e-15;
  bool limited_memory = false;
};

struct MinimizeResult {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// f(x, grad) returns the value; grad is null when only the value is needed.
using Objective = std::function<double(const RealVector& x, RealVector* grad)>;

MinimizeResult minimize(const Objective& f, RealVector x0, const MinimizeOptions& opts = {});

// f(rho, grad) with grad the Hermitian matrix G such that df = tr(G d rho).
using DensityObjective = std::function<double(const ComplexMatrix& rho, ComplexMatrix* grad)>;

struct DensityMinResult {
  ComplexMatrix rho;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes over density matrices of dimension start.rows(), starting from a
// full-rank mixture of `start` with the maximally mixed state.
DensityMinResult minimize_over_densities(const DensityObjective& f, const ComplexMatrix& start,
                                         const MinimizeOptions& opts = {});

namespace factor {

// Real and imaginary parts, row-major.
RealVector pack(const ComplexMatrix& a);
ComplexMatrix unpack(const RealVector& x, Index d);
ComplexMatrix density(const ComplexMatrix& a);
// Gradient in x of f(density(A)) given G = df/d rho.
RealVector gradient(const ComplexMatrix& a, const ComplexMatrix& rho, const ComplexMatrix& g);
// Factor of (1 - mix) rho + mix I/d.
ComplexMatrix from_density(const ComplexMatrix& rho, double mix = 1e-3);
// Haar-like random density: A with i.i.d. complex Gaussian entries.
ComplexMatrix random(Index d, std::mt19937_64& rng);

}  // namespace factor

}  // namespace aqss
