#include "aqss/optim.hpp"

#include <mutex>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

namespace aqss {

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw DomainError("solver tol must be positive");
  if (!(cfg.seesaw_tol > 0.0)) throw DomainError("solver seesaw_tol must be positive");
  if (cfg.restarts < 1) throw DomainError("solver restarts must be at least 1");
  if (cfg.max_iters < 1) throw DomainError("solver max_iters must be at least 1");
  if (!(cfg.step_init > 0.0)) throw DomainError("solver step_init must be positive");
}

std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

class CeresObjective final : public ceres::FirstOrderFunction {
 public:
  CeresObjective(const Objective& f, int n) : f_(f), n_(n) {}

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Eigen::Map<const RealVector> x(params, n_);
    if (gradient) {
      RealVector g(n_);
      *cost = f_(x, &g);
      Eigen::Map<RealVector>(gradient, n_) = g;
      return std::isfinite(*cost) && g.allFinite();
    }
    *cost = f_(x, nullptr);
    return std::isfinite(*cost);
  }

  int NumParameters() const override { return n_; }

 private:
  const Objective& f_;
  int n_;
};

}  // namespace

MinimizeResult minimize(const Objective& f, RealVector x0, const MinimizeOptions& opts) {
  // Dense BFGS on up to ~1500 parameters is intended; keep Ceres quiet about it.
  static std::once_flag quiet;
  std::call_once(quiet, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
  ceres::GradientProblem problem(new CeresObjective(f, static_cast<int>(x0.size())));
  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = opts.limited_memory ? ceres::LBFGS : ceres::BFGS;
  o.max_num_iterations = opts.max_iters;
  o.gradient_tolerance = opts.gradient_tol;
  o.function_tolerance = opts.function_tol;
  o.parameter_tolerance = opts.parameter_tol;
  o.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(o, problem, x0.data(), &summary);

  MinimizeResult r;
  r.value = f(x0, nullptr);
  r.x = std::move(x0);
  r.iterations = static_cast<int>(summary.iterations.size());
  r.converged = summary.termination_type == ceres::CONVERGENCE;
  return r;
}

DensityMinResult minimize_over_densities(const DensityObjective& f, const ComplexMatrix& start,
                                         const MinimizeOptions& opts) {
  const Index d = start.rows();
  const Objective obj = [&](const RealVector& x, RealVector* grad) {
    const ComplexMatrix a = factor::unpack(x, d);
    const ComplexMatrix rho = factor::density(a);
    if (!grad) return f(rho, nullptr);
    ComplexMatrix g;
    const double v = f(rho, &g);
    *grad = factor::gradient(a, rho, g);
    return v;
  };
  MinimizeResult m = minimize(obj, factor::pack(factor::from_density(start)), opts);
  return {factor::density(factor::unpack(m.x, d)), m.value, m.iterations, m.converged};
}

namespace factor {

RealVector pack(const ComplexMatrix& a) {
  const Index n = a.size();
  RealVector x(2 * n);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      x(i * a.cols() + j) = a(i, j).real();
      x(n + i * a.cols() + j) = a(i, j).imag();
    }
  return x;
}

ComplexMatrix unpack(const RealVector& x, Index d) {
  const Index n = d * d;
  ComplexMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(x(i * d + j), x(n + i * d + j));
  return a;
}

ComplexMatrix density(const ComplexMatrix& a) {
  return linalg::hermitian_part(a * a.adjoint()) / a.squaredNorm();
}

RealVector gradient(const ComplexMatrix& a, const ComplexMatrix& rho, const ComplexMatrix& g) {
  const Complex c = (g * rho).trace();
  const ComplexMatrix m = 2.0 * (g * a - c.real() * a) / a.squaredNorm();
  return pack(m);
}

ComplexMatrix from_density(const ComplexMatrix& rho, double mix) {
  const Index d = rho.rows();
  const ComplexMatrix target =
      (1.0 - mix) * rho + mix * ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return linalg::psd_sqrt(target);
}

ComplexMatrix random(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  ComplexMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(n01(rng), n01(rng));
  return a;
}

}  // namespace factor

}  // namespace aqss
