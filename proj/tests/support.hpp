#pragma once

// Random instances and brute-force references shared by the test binaries.
// Everything here uses Eigen directly so it stays independent of the code
// under test.

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "aqss/channels.hpp"

namespace aqss::testing {

inline ComplexMatrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) m(i, k) = Complex(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Index d, std::mt19937_64& rng) {
  const ComplexMatrix g = gaussian(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline ComplexMatrix random_unitary(Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(d, d, rng));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

// Ginibre ensemble with `rank` columns; full rank by default.
inline ComplexMatrix random_density(Index d, std::mt19937_64& rng, Index rank = -1) {
  const ComplexMatrix g = gaussian(d, rank < 0 ? d : rank, rng);
  const ComplexMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

inline ComplexVector random_pure(Index d, std::mt19937_64& rng) {
  const ComplexVector v = gaussian(d, 1, rng).col(0);
  return v / v.norm();
}

// Isometry din -> rank*dout split into Kraus blocks.
// The rank is raised to ceil(din/dout) when needed for an isometry to exist.
inline std::vector<ComplexMatrix> random_kraus(Index din, Index dout, Index rank,
                                               std::mt19937_64& rng) {
  rank = std::max(rank, (din + dout - 1) / dout);
  const ComplexMatrix g = gaussian(rank * dout, din, rng);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.adjoint() * g);
  const ComplexMatrix w = g * es.operatorInverseSqrt();
  std::vector<ComplexMatrix> ops;
  for (Index k = 0; k < rank; ++k) ops.push_back(w.middleRows(k * dout, dout));
  return ops;
}

inline KrausChannel random_channel(Index din, Index dout, Index rank, std::mt19937_64& rng) {
  return KrausChannel(din, dout, random_kraus(din, dout, rank, rng));
}

inline ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& x) {
  ComplexMatrix y = ComplexMatrix::Zero(ops.front().rows(), ops.front().rows());
  for (const auto& k : ops) y += k * x * k.adjoint();
  return y;
}

// N(X) = tr_in[(X^T (x) I) J] by explicit index sums, input factor first.
inline ComplexMatrix choi_apply(const ComplexMatrix& j, Index din, Index dout,
                                const ComplexMatrix& x) {
  ComplexMatrix y = ComplexMatrix::Zero(dout, dout);
  for (Index i = 0; i < din; ++i)
    for (Index k = 0; k < din; ++k)
      for (Index a = 0; a < dout; ++a)
        for (Index b = 0; b < dout; ++b) y(a, b) += x(i, k) * j(i * dout + a, k * dout + b);
  return y;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

// Eigenvalues below 1e-14 of the largest are rounding noise and dropped;
// their square roots would otherwise add ~1e-8 errors on rank-deficient inputs.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& p) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p);
  const double floor = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
  Eigen::VectorXd w = es.eigenvalues();
  for (Index i = 0; i < w.size(); ++i) w(i) = w(i) > floor ? std::sqrt(w(i)) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// Uhlmann fidelity as the squared sum of singular values of sqrt(r) sqrt(s).
inline double fidelity_ref(const ComplexMatrix& r, const ComplexMatrix& s) {
  Eigen::JacobiSVD<ComplexMatrix> svd(sqrt_psd(r) * sqrt_psd(s));
  const double root = svd.singularValues().sum();
  return root * root;
}

inline double entropy_ref(const ComplexMatrix& r) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-15) s -= l * std::log(l);
  }
  return s;
}

// q via the eigenvalues of (rho (x) sqrt(sigma)) J (rho (x) sqrt(sigma)).
inline double q_ref(const ComplexMatrix& j, const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const ComplexMatrix b = kron(rho, sqrt_psd(sigma));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b * j * b);
  const double floor = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
  double q = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > floor) q += std::sqrt(es.eigenvalues()(i));
  return q;
}

}  // namespace aqss::testing
