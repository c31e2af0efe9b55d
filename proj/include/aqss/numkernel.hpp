#pragma once

// Dense complex linear algebra shared by every other module: Hermitian
// eigensystems, PSD matrix functions, Schatten norms, partial traces,
// purification and projection onto the set of density matrices.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "aqss/errors.hpp"

namespace aqss {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical thresholds. Every routine that depends on one accepts an instance,
// so solver configurations can override the defaults.
struct Tolerances {
  // Eigenvalues below -not_psd reject an operator; those in [-not_psd, 0) are clipped.
  double not_psd = 1e-6;
  // Relative floor (times max(1, largest eigenvalue)) below which eigenvalues
  // count as zero inside matrix functions.
  double eig_floor = 1e-13;
  // Accepted |tr(rho) - 1| for density-matrix inputs.
  double trace = 1e-8;
  // Kraus-rank truncation when decomposing Choi matrices.
  double rank = 1e-10;
  // Accepted trace-preservation residual and Choi negativity for channels.
  double cptp = 1e-8;
};

class HermitianOperator {
 public:
  // Symmetrizes (M + M^dagger)/2. Throws ShapeError for non-square or
  // non-finite input.
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator identity(Index dim);

  Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

class DensityMatrix {
 public:
  // Validates positivity and unit trace: eigenvalues below -tol.not_psd throw
  // NotPsdError, |tr - 1| > tol.trace throws DomainError. Small negative
  // eigenvalues are clipped and the trace renormalized.
  explicit DensityMatrix(const HermitianOperator& op, const Tolerances& tol = {});
  explicit DensityMatrix(const ComplexMatrix& m, const Tolerances& tol = {})
      : DensityMatrix(HermitianOperator(m), tol) {}

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix basis_state(Index dim, Index k);
  static DensityMatrix from_vector(const ComplexVector& v);

  Index dim() const noexcept { return op_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  const HermitianOperator& op() const noexcept { return op_; }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, ComplexMatrix m);
  friend DensityMatrix density_project(const HermitianOperator& h);

  HermitianOperator op_;
};

class PureState {
 public:
  // Requires | ||v|| - 1 | <= 1e-10; use normalized() for raw amplitudes.
  explicit PureState(ComplexVector amplitudes);
  static PureState normalized(const ComplexVector& v);

  Index dim() const noexcept { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  DensityMatrix projector() const;

 private:
  ComplexVector amplitudes_;
};

struct EigenSystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, unitary
};

EigenSystem hermitian_eig(const HermitianOperator& h);

HermitianOperator psd_sqrt(const HermitianOperator& p, const Tolerances& tol = {});

// P^exponent taken on the support of P (pseudo-inverse convention for
// negative exponents).
HermitianOperator psd_power(const HermitianOperator& p, double exponent,
                            const Tolerances& tol = {});

double trace_norm(const ComplexMatrix& m);

// Traces out every factor not listed in `keep` (0-based factor indices,
// returned in ascending factor order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<Index>& dims,
                            const std::vector<Index>& keep);

// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// sum_i sqrt(lambda_i) |psi_i> (x) |psi_i>, reference factor second.
PureState purify(const DensityMatrix& rho);

// Frobenius-nearest density matrix: eigenvalues projected onto the simplex.
DensityMatrix density_project(const HermitianOperator& h);

// ---------------------------------------------------------------------------
// Raw-matrix helpers used inside iterative solvers, where wrapping every
// iterate in a validated type would dominate the cost.
namespace linalg {

ComplexMatrix hermitian_part(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
RealVector project_to_simplex(const RealVector& v);
ComplexMatrix project_to_density(const ComplexMatrix& h);

// f applied to the eigenvalues of a Hermitian matrix.
template <class F>
ComplexMatrix spectral_apply(const ComplexMatrix& h, F&& f);

ComplexMatrix psd_sqrt(const ComplexMatrix& p, double eig_floor = 1e-13);
ComplexMatrix psd_power(const ComplexMatrix& p, double exponent, double eig_floor = 1e-13);

// Trace over the second factor of a (d1*d2)-dimensional matrix, and over the first.
ComplexMatrix trace_second(const ComplexMatrix& m, Index d1, Index d2);
ComplexMatrix trace_first(const ComplexMatrix& m, Index d1, Index d2);

// Sum of |eigenvalues| of a Hermitian matrix.
double hermitian_trace_norm(const ComplexMatrix& h);

}  // namespace linalg

template <class F>
ComplexMatrix linalg::spectral_apply(const ComplexMatrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_apply: eigendecomposition failed");
  }
  RealVector w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i) w(i) = f(w(i));
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace aqss
