#include "aqss/recovery.hpp"

#include <cmath>
#include <sstream>

namespace aqss {

namespace {

ComplexVector vec(const ComplexMatrix& p) {
  ComplexVector v(p.size());
  for (Index i = 0; i < p.rows(); ++i)
    for (Index k = 0; k < p.cols(); ++k) v(i * p.cols() + k) = p(i, k);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, Index d) {
  ComplexMatrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) m(i, k) = v(i * d + k);
  return m;
}

// vec(P)^dagger J vec(P) and its gradient W + W^dagger.
double input_fidelity(const ComplexMatrix& choi, const ComplexMatrix& p, ComplexMatrix* g) {
  const ComplexVector v = vec(p);
  const ComplexVector w = choi * v;
  if (g) {
    const ComplexMatrix wm = unvec(w, p.rows());
    *g = wm + wm.adjoint();
  }
  return v.dot(w).real();
}

ComplexMatrix psd_clip(const ComplexMatrix& h) {
  return linalg::spectral_apply(linalg::hermitian_part(h), [](double x) { return std::max(x, 0.0); });
}

ComplexVector entangled_input(const ComplexMatrix& p) {
  return vec(linalg::psd_sqrt(p));
}

double lambda_min(const ComplexMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(linalg::hermitian_part(h),
                                                      Eigen::EigenvaluesOnly)
      .eigenvalues()(0);
}

ComplexMatrix identity_choi(Index d) {
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) phi(i * d + i) = 1.0;
  return phi * phi.adjoint();
}

// 1/2 ||(A (x) I) Delta (A^dagger (x) I)||_1 / ||A||_F^2 and its gradient in
// the packed (Re A, Im A) coordinates.
double stabilized_distance(const ComplexMatrix& delta, const ComplexMatrix& a, Index d,
                           RealVector* grad) {
  const ComplexMatrix ai = linalg::kron(a, ComplexMatrix::Identity(d, d));
  const ComplexMatrix y = linalg::hermitian_part(ai * delta * ai.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(y);
  const RealVector& w = es.eigenvalues();
  const double t = w.cwiseAbs().sum();
  const double n = a.squaredNorm();
  if (grad) {
    RealVector sgn(w.size());
    for (Index i = 0; i < w.size(); ++i) sgn(i) = w(i) > 0.0 ? 1.0 : (w(i) < 0.0 ? -1.0 : 0.0);
    const ComplexMatrix s = es.eigenvectors() * sgn.asDiagonal() * es.eigenvectors().adjoint();
    const ComplexMatrix m = linalg::trace_second(delta * ai.adjoint() * s, d, d);
    const ComplexMatrix gc = 0.5 * (2.0 * m.adjoint() / n - t * 2.0 * a / (n * n));
    *grad = factor::pack(gc);
  }
  return 0.5 * t / n;
}

}  // namespace

// --- Dykstra --------------------------------------------------------------

ChoiMatrix dykstra_cptp_project(const HermitianOperator& x, Index dim_in, Index dim_out,
                                double tol, int max_iters) {
  if (x.dim() != dim_in * dim_out) throw ShapeError("dykstra_cptp_project: dimension mismatch");
  const ComplexMatrix id_in = ComplexMatrix::Identity(dim_in, dim_in);
  const ComplexMatrix id_out = ComplexMatrix::Identity(dim_out, dim_out);
  ComplexMatrix y = x.matrix();
  ComplexMatrix p = ComplexMatrix::Zero(y.rows(), y.cols());
  ComplexMatrix q = p;
  double step = 0.0, tp = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const ComplexMatrix z = psd_clip(y + p);
    p = y + p - z;
    const ComplexMatrix zq = z + q;
    const ComplexMatrix yn =
        zq + linalg::kron(id_in - linalg::trace_second(zq, dim_in, dim_out), id_out) /
                 static_cast<double>(dim_out);
    q = zq - yn;
    step = (yn - y).norm();
    tp = (linalg::trace_second(z, dim_in, dim_out) - id_in).norm();
    y = linalg::hermitian_part(yn);
    if (step < tol && tp < tol) return ChoiMatrix(dim_in, dim_out, HermitianOperator(y));
  }
  std::ostringstream os;
  os << "dykstra_cptp_project: no convergence after " << max_iters << " iterations (step "
     << step << ", trace residual " << tp << ")";
  throw NumericalError(os.str());
}

// --- worst-case input -----------------------------------------------------

WorstCaseInput min_input_fidelity(const ComplexMatrix& choi, Index d, const SolverConfig& cfg) {
  validate(cfg);
  if (choi.rows() != d * d) throw ShapeError("min_input_fidelity: Choi must have dimension d*d");
  const DensityObjective f = [&](const ComplexMatrix& p, ComplexMatrix* g) {
    return input_fidelity(choi, p, g);
  };
  MinimizeOptions opts;
  opts.gradient_tol = 1e-13;
  WorstCaseInput best;
  best.fidelity = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    ComplexMatrix start = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    if (restart > 0) {
      auto rng = task_rng(cfg.seed, static_cast<std::uint64_t>(restart));
      start = factor::density(factor::random(d, rng));
    }
    const DensityMinResult r = minimize_over_densities(f, start, opts);
    if (r.value < best.fidelity) {
      best.fidelity = r.value;
      best.reference = density_project(HermitianOperator(r.rho));
      ComplexMatrix g;
      const double v = input_fidelity(choi, best.reference.matrix(), &g);
      // L is 2-homogeneous in P, so tr(G P) = 2 L.
      best.stationarity = std::max(0.0, 2.0 * v - lambda_min(g));
    }
    if (best.stationarity <= cfg.tol) break;
  }
  best.fidelity = std::clamp(best.fidelity, 0.0, 1.0);
  best.psi = PureState::normalized(entangled_input(best.reference.matrix()));
  best.converged = best.stationarity <= cfg.tol;
  return best;
}

WorstCaseInput worst_case_input(const KrausChannel& f, const SolverConfig& cfg) {
  if (f.dim_in() != f.dim_out()) throw ShapeError("worst_case_input: channel must preserve dimension");
  return min_input_fidelity(kraus_to_choi(f).matrix(), f.dim_in(), cfg);
}

// --- diamond-distance estimate --------------------------------------------

DiamondEstimate diamond_distance_lower(const KrausChannel& f, const SolverConfig& cfg) {
  if (f.dim_in() != f.dim_out())
    throw ShapeError("diamond_distance_lower: channel must preserve dimension");
  validate(cfg);
  const Index d = f.dim_in();
  const ComplexMatrix delta = kraus_to_choi(f).matrix() - identity_choi(d);
  const Objective obj = [&](const RealVector& x, RealVector* g) {
    const double v = stabilized_distance(delta, factor::unpack(x, d), d, g);
    if (g) *g = -*g;
    return -v;
  };

  std::vector<ComplexMatrix> starts;
  starts.push_back(linalg::psd_sqrt(worst_case_input(f, cfg).reference.matrix()));
  starts.push_back(ComplexMatrix::Identity(d, d));
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = task_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(r));
    starts.push_back(factor::random(d, rng));
  }

  DiamondEstimate best;
  best.value = -1.0;
  MinimizeOptions opts;
  opts.gradient_tol = 1e-12;
  for (const auto& a0 : starts) {
    // The start itself is a candidate even if the local search fails to move.
    RealVector x0 = factor::pack(a0);
    double v0 = -obj(x0, nullptr);
    RealVector xb = x0;
    const MinimizeResult r = minimize(obj, x0, opts);
    if (-r.value > v0) {
      v0 = -r.value;
      xb = r.x;
    }
    if (v0 > best.value) {
      best.value = v0;
      best.psi = PureState::normalized(vec(factor::unpack(xb, d)));
    }
  }
  best.value = std::clamp(best.value, 0.0, 1.0);
  return best;
}

// --- recovery -------------------------------------------------------------

namespace detail {

ComplexMatrix link_choi(const ComplexMatrix& jn, const ComplexMatrix& jr, Index q, Index m) {
  // J_RN[(i,c),(j,d)] = sum_{a,b} J_N[(i,a),(j,b)] J_R[(a,c),(b,d)].
  ComplexMatrix out = ComplexMatrix::Zero(q * q, q * q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      const auto nij = jn.block(i * m, j * m, m, m);
      auto blk = out.block(i * q, j * q, q, q);
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) {
          const Complex c = nij(a, b);
          if (c != Complex(0.0)) blk += c * jr.block(a * q, b * q, q, q);
        }
    }
  return out;
}

ComplexMatrix recovery_gradient(const ComplexMatrix& jn, const ComplexMatrix& p, Index q, Index m) {
  // G[(b,d),(a,c)] = sum_{i,j} v_(j,d) conj(v_(i,c)) J_N[(i,a),(j,b)], v = vec(P).
  const ComplexVector v = vec(p);
  ComplexMatrix g = ComplexMatrix::Zero(m * q, m * q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      const ComplexMatrix omega = v.segment(j * q, q) * v.segment(i * q, q).adjoint();  // (d, c)
      const auto nij = jn.block(i * m, j * m, m, m);                                   // (a, b)
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) {
          const Complex c = nij(a, b);
          if (c != Complex(0.0)) g.block(b * q, a * q, q, q) += c * omega;
        }
    }
  return linalg::hermitian_part(g);
}

}  // namespace detail

RecoveryResult optimize_recovery(const KrausChannel& n, const SolverConfig& cfg) {
  validate(cfg);
  const Index q = n.dim_in(), m = n.dim_out();
  const ComplexMatrix jn = kraus_to_choi(n).matrix();
  const double eta = cfg.step_init;
  SolverConfig eval_cfg = cfg;
  eval_cfg.restarts = 1;

  const auto project_r = [&](const ComplexMatrix& x) {
    return dykstra_cptp_project(HermitianOperator(x), m, q, 1e-10).matrix();
  };
  const auto project_p = [](const ComplexMatrix& x) { return linalg::project_to_density(x); };
  const auto grad_p = [&](const ComplexMatrix& jr, const ComplexMatrix& p) {
    ComplexMatrix g;
    input_fidelity(detail::link_choi(jn, jr, q, m), p, &g);
    return g;
  };

  // Trace-and-prepare I/q: a feasible start and the baseline candidate.
  ComplexMatrix jr = ComplexMatrix::Identity(m * q, m * q) / static_cast<double>(q);
  ComplexMatrix p = ComplexMatrix::Identity(q, q) / static_cast<double>(q);

  RecoveryResult out;
  double best = -1.0;
  ComplexMatrix best_jr = jr;
  const auto consider = [&](const ComplexMatrix& cand) {
    const WorstCaseInput w = min_input_fidelity(detail::link_choi(jn, cand, q, m), q, eval_cfg);
    if (w.fidelity > best) {
      best = w.fidelity;
      best_jr = cand;
      out.worst_input = w.psi;
    }
    return w.fidelity;
  };
  consider(jr);

  // Averages over epochs of doubling length, so each average covers the most
  // recent half of the iterations.
  ComplexMatrix avg = ComplexMatrix::Zero(m * q, m * q);
  int epoch_start = 0, epoch_len = 16;
  double last_epoch_best = best;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const ComplexMatrix jr_h = project_r(jr + eta * detail::recovery_gradient(jn, p, q, m));
    const ComplexMatrix p_h = project_p(p - eta * grad_p(jr, p));
    jr = project_r(jr + eta * detail::recovery_gradient(jn, p_h, q, m));
    p = project_p(p - eta * grad_p(jr_h, p_h));
    avg += jr_h;

    if (it + 1 - epoch_start == epoch_len) {
      consider(project_r(avg / static_cast<double>(epoch_len)));
      consider(jr);
      avg.setZero();
      epoch_start = it + 1;
      epoch_len *= 2;
      const double gain = best - last_epoch_best;
      last_epoch_best = best;
      if (best >= 1.0 - 1e-12 || (epoch_len > 64 && gain < 1e-3 * cfg.seesaw_tol)) {
        out.converged = true;
        ++it;
        break;
      }
    }
  }
  out.iterations = it;
  out.fidelity = std::clamp(best, 0.0, 1.0);
  out.recovery = choi_to_kraus(ChoiMatrix(m, q, HermitianOperator(best_jr)), cfg.tolerances);
  return out;
}

}  // namespace aqss
