#include "aqss/qfunction.hpp"

#include <sstream>

namespace aqss {

namespace {

constexpr double kPolarFloor = 1e-12;

}  // namespace

QKernel::QKernel(const ChoiMatrix& j, const Tolerances& tol)
    : din_(j.dim_in()),
      dout_(j.dim_out()),
      sqrt_j_(linalg::psd_sqrt(j.matrix(), tol.eig_floor)),
      eig_floor_(tol.eig_floor) {}

void QKernel::check(const ComplexMatrix& rho, const ComplexMatrix& sigma) const {
  if (rho.rows() != din_ || rho.cols() != din_ || sigma.rows() != dout_ ||
      sigma.cols() != dout_) {
    std::ostringstream os;
    os << "q-function: got rho " << rho.rows() << "x" << rho.cols() << " and sigma "
       << sigma.rows() << "x" << sigma.cols() << " for a " << din_ << " -> " << dout_
       << " channel";
    throw ShapeError(os.str());
  }
}

double QKernel::value(const ComplexMatrix& rho, const ComplexMatrix& sigma) const {
  check(rho, sigma);
  const ComplexMatrix x = sqrt_j_ * linalg::kron(rho, linalg::psd_sqrt(sigma, eig_floor_));
  return Eigen::BDCSVD<ComplexMatrix>(x).singularValues().sum();
}

double QKernel::grad_rho(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                         ComplexMatrix* g) const {
  check(rho, sigma);
  const ComplexMatrix s = linalg::psd_sqrt(sigma, eig_floor_);
  const ComplexMatrix x = sqrt_j_ * linalg::kron(rho, s);
  Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double q = sv.sum();
  if (!g) return q;
  Index k = 0;
  const double cut = kPolarFloor * (sv.size() ? sv(0) : 0.0);
  while (k < sv.size() && sv(k) > cut) ++k;
  const ComplexMatrix w = svd.matrixU().leftCols(k) * svd.matrixV().leftCols(k).adjoint();
  const ComplexMatrix y = linalg::kron(ComplexMatrix::Identity(din_, din_), s) * w.adjoint() * sqrt_j_;
  *g = linalg::hermitian_part(linalg::trace_second(y, din_, dout_));
  return q;
}

double QKernel::grad_sigma(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                           ComplexMatrix* g) const {
  check(rho, sigma);
  const double q = value(rho, sigma);
  if (!g) return q;
  const ComplexMatrix rho2 = rho * rho;
  const ComplexMatrix m = sqrt_j_ * linalg::kron(rho2, sigma) * sqrt_j_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(m));
  if (es.info() != Eigen::Success) throw NumericalError("q-function: eigendecomposition failed");
  const RealVector& w = es.eigenvalues();
  const double cut = 1e-13 * std::max(w.maxCoeff(), 1e-300);
  RealVector inv(w.size());
  for (Index i = 0; i < w.size(); ++i) inv(i) = w(i) > cut ? 1.0 / std::sqrt(w(i)) : 0.0;
  const ComplexMatrix m_inv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  const ComplexMatrix y = linalg::kron(rho2, ComplexMatrix::Identity(dout_, dout_)) * sqrt_j_ *
                          m_inv * sqrt_j_;
  *g = 0.5 * linalg::hermitian_part(linalg::trace_first(y, din_, dout_));
  return q;
}

}  // namespace aqss
