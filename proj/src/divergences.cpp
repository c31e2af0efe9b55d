#include "aqss/divergences.hpp"

#include <cmath>
#include <sstream>

namespace aqss {

namespace {

constexpr double kLogFloor = 1e-18;
constexpr double kSupportTol = 1e-12;
constexpr double kFaceTol = 1e-8;

ComplexMatrix log_psd(const ComplexMatrix& m) {
  return linalg::spectral_apply(linalg::hermitian_part(m),
                                [](double x) { return std::log(std::max(x, kLogFloor)); });
}

double minus_log_clamped(double x) { return x > 0.0 ? -std::log(std::min(x, 1.0)) : kInfinity; }

}  // namespace

double von_neumann_entropy(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(rho),
                                                 Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("entropy: eigendecomposition failed");
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha,
                        const Tolerances& tol) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha))
    throw DomainError("sandwiched_renyi: alpha must be positive and different from 1");
  if (rho.dim() != sigma.dim()) throw ShapeError("sandwiched_renyi: dimension mismatch");

  const EigenSystem es = hermitian_eig(sigma.op());
  const double cut = tol.eig_floor * std::max(1.0, es.values(0));
  const double g = (1.0 - alpha) / (2.0 * alpha);
  RealVector pw(es.values.size());
  ComplexMatrix kernel_proj = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > cut) {
      pw(i) = std::pow(es.values(i), g);
    } else {
      pw(i) = 0.0;
      kernel_proj += es.vectors.col(i) * es.vectors.col(i).adjoint();
    }
  }
  if (alpha > 1.0 && (kernel_proj * rho.matrix()).trace().real() > kSupportTol) return kInfinity;

  const ComplexMatrix s = es.vectors * pw.asDiagonal() * es.vectors.adjoint();
  const ComplexMatrix x = linalg::hermitian_part(s * rho.matrix() * s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ex(x, Eigen::EigenvaluesOnly);
  double t = 0.0;
  for (Index i = 0; i < ex.eigenvalues().size(); ++i)
    if (ex.eigenvalues()(i) > 0.0) t += std::pow(ex.eigenvalues()(i), alpha);
  if (!(t > 0.0)) return kInfinity;
  return std::log(t) / (alpha - 1.0);
}

double q_function(const DensityMatrix& rho, const DensityMatrix& sigma, const ChoiMatrix& j) {
  return QKernel(j).value(rho.matrix(), sigma.matrix());
}

DensityMatrix channel_state(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) throw ShapeError("channel_state: dimension mismatch");
  const ComplexMatrix r = linalg::kron(linalg::psd_sqrt(rho.matrix().transpose()),
                                       ComplexMatrix::Identity(ch.dim_out(), ch.dim_out()));
  return DensityMatrix(r * kraus_to_choi(ch).matrix() * r);
}

double mutual_info_vn(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) throw ShapeError("mutual_info_vn: dimension mismatch");
  const double i = von_neumann_entropy(rho) + von_neumann_entropy(ch.apply(rho.matrix())) -
                   von_neumann_entropy(channel_state(ch, rho));
  return std::max(0.0, i);
}

RenyiHalfInfo mutual_info_renyi_half(const KrausChannel& ch, const DensityMatrix& rho,
                                     const SolverConfig& cfg) {
  if (rho.dim() != ch.dim_in()) throw ShapeError("mutual_info_renyi_half: dimension mismatch");
  const DensityMatrix rho_t(ComplexMatrix(rho.matrix().transpose()));
  const MaxSigmaResult m = maximize_sigma(rho_t, kraus_to_choi(ch), cfg);
  RenyiHalfInfo out;
  out.value = std::max(0.0, minus_log_clamped(m.value * m.value));
  out.sigma = m.sigma;
  out.stationarity = m.stationarity;
  out.converged = m.converged;
  return out;
}

CapacityResult capacity_ea(const KrausChannel& ch, const SolverConfig& cfg) {
  validate(cfg);
  const KrausChannel comp = complementary(ch);
  const Index d = ch.dim_in();

  // Minimizes -I(rho); gradient of I up to a multiple of the identity.
  const DensityObjective neg_info = [&](const ComplexMatrix& rho, ComplexMatrix* g) {
    const ComplexMatrix out = ch.apply(rho);
    const ComplexMatrix env = comp.apply(rho);
    const double i = von_neumann_entropy(rho) + von_neumann_entropy(out) - von_neumann_entropy(env);
    if (g) {
      *g = log_psd(rho) + ch.apply_adjoint(log_psd(out)) - comp.apply_adjoint(log_psd(env));
      *g = linalg::hermitian_part(*g);
    }
    return -i;
  };

  const auto certificate = [&](const ComplexMatrix& rho) {
    ComplexMatrix g;
    neg_info(rho, &g);
    g = -g;
    const EigenSystem es = hermitian_eig(HermitianOperator(rho));
    Index k = 0;
    while (k < es.values.size() && es.values(k) > kFaceTol) ++k;
    const ComplexMatrix v = es.vectors.leftCols(std::max<Index>(k, 1));
    const ComplexMatrix face = linalg::hermitian_part(v.adjoint() * g * v);
    const double top = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(face, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
    return std::max(0.0, top - (g * rho).trace().real());
  };

  MinimizeOptions opts;
  opts.max_iters = std::min(cfg.max_iters, 2000);
  CapacityResult best;
  double best_val = -kInfinity;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    ComplexMatrix start = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    if (restart > 0) {
      auto rng = task_rng(cfg.seed, static_cast<std::uint64_t>(restart));
      start = factor::density(factor::random(d, rng));
    }
    const DensityMinResult r = minimize_over_densities(neg_info, start, opts);
    best.restarts_used = restart + 1;
    if (-r.value > best_val) {
      best_val = -r.value;
      best.rho = density_project(HermitianOperator(r.rho));
      best.certificate = certificate(r.rho);
    }
    if (best.certificate <= cfg.tol) break;
  }
  best.value = std::max(0.0, best_val);
  best.converged = best.certificate <= cfg.tol;
  return best;
}

RenyiHalfCapacity capacity_renyi_half(const ChoiMatrix& j, const SolverConfig& cfg) {
  RenyiHalfCapacity out;
  out.saddle = saddle_max_sigma_min_rho(j, cfg);
  const double v = out.saddle.minmax_value;
  out.value = std::max(0.0, minus_log_clamped(v * v));
  out.input = DensityMatrix(ComplexMatrix(out.saddle.rho_star.matrix().transpose()));
  return out;
}

RenyiHalfCapacity capacity_renyi_half(const KrausChannel& ch, const SolverConfig& cfg) {
  return capacity_renyi_half(kraus_to_choi(ch), cfg);
}

}  // namespace aqss
