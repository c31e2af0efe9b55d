#include "aqss/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace aqss {

namespace {

constexpr double kUnitNormTol = 1e-10;

double floor_for(const RealVector& w, double eig_floor) {
  const double top = w.size() ? std::max(1.0, w.maxCoeff()) : 1.0;
  return eig_floor * top;
}

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << who << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* who) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << who << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw ShapeError(os.str());
  }
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> solve_eig(const ComplexMatrix& h, const char* who) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    const auto& s = svd.singularValues();
    std::ostringstream os;
    os << who << ": eigendecomposition did not converge (dim " << h.rows()
       << ", condition estimate "
       << (s.size() && s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                                           : std::numeric_limits<double>::infinity())
       << ")";
    throw NumericalError(os.str());
  }
  return es;
}

}  // namespace

// --- HermitianOperator ----------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  if (!m.allFinite()) throw ShapeError("HermitianOperator: non-finite entries");
  matrix_ = linalg::hermitian_part(m);
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

// --- DensityMatrix --------------------------------------------------------

DensityMatrix::DensityMatrix(const HermitianOperator& op, const Tolerances& tol) : op_(op) {
  if (op.dim() == 0) throw ShapeError("DensityMatrix: empty matrix");
  const double tr = op.matrix().trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1";
    throw DomainError(os.str());
  }
  auto es = solve_eig(op.matrix(), "DensityMatrix");
  const double lmin = es.eigenvalues()(0);
  if (lmin < -tol.not_psd) {
    std::ostringstream os;
    os << "DensityMatrix: eigenvalue " << lmin << " below " << -tol.not_psd;
    throw NotPsdError(os.str(), lmin);
  }
  ComplexMatrix m = op.matrix();
  if (lmin < 0.0) {
    RealVector w = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  }
  m /= m.trace().real();
  op_ = HermitianOperator(m);
}

DensityMatrix::DensityMatrix(Trusted, ComplexMatrix m) : op_(m) {}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Trusted{}, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) throw ShapeError("basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(Trusted{}, m);
}

DensityMatrix DensityMatrix::from_vector(const ComplexVector& v) {
  const double n = v.norm();
  if (n == 0.0 || !v.allFinite()) throw DomainError("from_vector: zero or non-finite vector");
  ComplexVector u = v / n;
  return DensityMatrix(Trusted{}, u * u.adjoint());
}

// --- PureState ------------------------------------------------------------

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ShapeError("PureState: empty vector");
  if (std::abs(amplitudes_.norm() - 1.0) > kUnitNormTol) {
    throw DomainError("PureState: vector is not unit norm");
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (n == 0.0 || !v.allFinite()) throw DomainError("PureState: zero or non-finite vector");
  return PureState(v / n);
}

DensityMatrix PureState::projector() const { return DensityMatrix::from_vector(amplitudes_); }

// --- spectral operations --------------------------------------------------

EigenSystem hermitian_eig(const HermitianOperator& h) {
  auto es = solve_eig(h.matrix(), "hermitian_eig");
  const Index n = h.dim();
  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

HermitianOperator psd_sqrt(const HermitianOperator& p, const Tolerances& tol) {
  return psd_power(p, 0.5, tol);
}

HermitianOperator psd_power(const HermitianOperator& p, double exponent, const Tolerances& tol) {
  auto es = solve_eig(p.matrix(), "psd_power");
  const double lmin = es.eigenvalues().size() ? es.eigenvalues()(0) : 0.0;
  if (lmin < -tol.not_psd) {
    std::ostringstream os;
    os << "psd_power: eigenvalue " << lmin << " below " << -tol.not_psd;
    throw NotPsdError(os.str(), lmin);
  }
  const double cut = floor_for(es.eigenvalues(), tol.eig_floor);
  RealVector w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i) w(i) = w(i) > cut ? std::pow(w(i), exponent) : 0.0;
  return HermitianOperator(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint());
}

double trace_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<Index>& dims,
                            const std::vector<Index>& keep) {
  require_square(m, "partial_trace");
  if (dims.empty()) throw ShapeError("partial_trace: empty factor list");
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  if (total != m.rows()) {
    std::ostringstream os;
    os << "partial_trace: factor dimensions multiply to " << total << " but matrix is "
       << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
  const Index nf = static_cast<Index>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  for (Index k : keep) {
    if (k < 0 || k >= nf || kept[k]) throw ShapeError("partial_trace: bad keep index set");
    kept[k] = true;
  }
  if (keep.empty()) throw ShapeError("partial_trace: keep set must be nonempty");

  // Row-major strides of the full index.
  std::vector<Index> stride(dims.size());
  stride[nf - 1] = 1;
  for (Index f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  // Offsets of every kept multi-index and every traced multi-index.
  auto offsets = [&](bool want_kept) {
    std::vector<Index> off{0};
    for (Index f = 0; f < nf; ++f) {
      if (kept[f] != want_kept) continue;
      std::vector<Index> next;
      next.reserve(off.size() * dims[f]);
      for (Index o : off)
        for (Index v = 0; v < dims[f]; ++v) next.push_back(o + v * stride[f]);
      off.swap(next);
    }
    return off;
  };
  const std::vector<Index> keep_off = offsets(true);
  const std::vector<Index> trace_off = offsets(false);

  const Index dk = static_cast<Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Index a = 0; a < dk; ++a)
    for (Index b = 0; b < dk; ++b) {
      Complex s = 0.0;
      for (Index t : trace_off) s += m(keep_off[a] + t, keep_off[b] + t);
      out(a, b) = s;
    }
  return out;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity");
  const ComplexMatrix a = linalg::psd_sqrt(rho.matrix());
  const ComplexMatrix b = linalg::psd_sqrt(sigma.matrix());
  const double f = trace_norm(a * b);
  return std::clamp(f * f, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  return std::clamp(0.5 * linalg::hermitian_trace_norm(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

PureState purify(const DensityMatrix& rho) {
  const EigenSystem es = hermitian_eig(rho.op());
  const Index d = rho.dim();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) {
    const double lam = std::max(es.values(i), 0.0);
    if (lam == 0.0) continue;
    psi += std::sqrt(lam) * linalg::kron(es.vectors.col(i), es.vectors.col(i));
  }
  return PureState::normalized(psi);
}

DensityMatrix density_project(const HermitianOperator& h) {
  return DensityMatrix(DensityMatrix::Trusted{}, linalg::project_to_density(h.matrix()));
}

// --- linalg ---------------------------------------------------------------

namespace linalg {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RealVector project_to_simplex(const RealVector& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

ComplexMatrix project_to_density(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw NumericalError("project_to_density: eig failed");
  const RealVector w = project_to_simplex(es.eigenvalues());
  ComplexMatrix out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& p, double eig_floor) {
  return psd_power(p, 0.5, eig_floor);
}

ComplexMatrix psd_power(const ComplexMatrix& p, double exponent, double eig_floor) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(p));
  if (es.info() != Eigen::Success) throw NumericalError("psd_power: eig failed");
  const double cut = floor_for(es.eigenvalues(), eig_floor);
  RealVector w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i) w(i) = w(i) > cut ? std::pow(w(i), exponent) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix trace_second(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
  return out;
}

ComplexMatrix trace_first(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

double hermitian_trace_norm(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_trace_norm: eig failed");
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace linalg

}  // namespace aqss
