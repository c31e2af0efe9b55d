#pragma once

// q(rho, sigma) = || J^{1/2} (rho (x) sigma^{1/2}) ||_1 for a fixed Choi matrix J,
// with gradients in each argument. Convex and 1-homogeneous in rho, concave
// and 1/2-homogeneous in sigma.

#include "aqss/channels.hpp"

namespace aqss {

class QKernel {
 public:
  explicit QKernel(const ChoiMatrix& j, const Tolerances& tol = {});

  Index dim_in() const noexcept { return din_; }
  Index dim_out() const noexcept { return dout_; }
  const ComplexMatrix& sqrt_choi() const noexcept { return sqrt_j_; }

  // Raw matrices; sigma must be PSD. ShapeError on dimension mismatch.
  double value(const ComplexMatrix& rho, const ComplexMatrix& sigma) const;

  // Returns q and writes dq/drho at fixed sigma (polar factor truncated to the
  // numerical support).
  double grad_rho(const ComplexMatrix& rho, const ComplexMatrix& sigma, ComplexMatrix* g) const;

  // Returns q and writes dq/dsigma at fixed rho, using the pseudo-inverse
  // square root of J^{1/2} (rho^2 (x) sigma) J^{1/2}.
  double grad_sigma(const ComplexMatrix& rho, const ComplexMatrix& sigma, ComplexMatrix* g) const;

 private:
  void check(const ComplexMatrix& rho, const ComplexMatrix& sigma) const;

  Index din_, dout_;
  ComplexMatrix sqrt_j_;
  double eig_floor_;
};

}  // namespace aqss
