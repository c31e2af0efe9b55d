#pragma once

// Channel representations (Kraus, Choi, Stinespring) and the constructions
// the analysis needs: composition, partial trace, preparation, complement.

#include <vector>

#include "aqss/numkernel.hpp"

namespace aqss {

struct CptpDiagnostics {
  double tp_residual = 0.0;          // operator norm of sum K^dagger K - I
  double choi_min_eigenvalue = 0.0;  // of the unnormalized Choi matrix
  bool passed = false;
};

// Diagnostic only; never throws on non-CPTP input. Throws ShapeError if an
// operator is not dim_out x dim_in.
CptpDiagnostics validate_cptp(Index dim_in, Index dim_out, const std::vector<ComplexMatrix>& ops,
                              const Tolerances& tol = {});

class KrausChannel {
 public:
  // Every operator must be dim_out x dim_in and the set trace preserving within
  // tol.cptp, otherwise ShapeError / NotCptpError.
  KrausChannel(Index dim_in, Index dim_out, std::vector<ComplexMatrix> ops,
               const Tolerances& tol = {});

  static KrausChannel identity(Index dim);
  static KrausChannel unitary(const ComplexMatrix& u);

  Index dim_in() const noexcept { return dim_in_; }
  Index dim_out() const noexcept { return dim_out_; }
  Index rank() const noexcept { return static_cast<Index>(ops_.size()); }
  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }

  // sum_i K_i X K_i^dagger and sum_i K_i^dagger Y K_i on raw matrices.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const;

 private:
  Index dim_in_;
  Index dim_out_;
  std::vector<ComplexMatrix> ops_;
};

CptpDiagnostics validate_cptp(const KrausChannel& ch, const Tolerances& tol = {});

class ChoiMatrix {
 public:
  // J = sum_{ij} |i><j| (x) N(|i><j|), input factor first, trace dim_in.
  // Throws ShapeError on size mismatch and NotCptpError if J is not PSD
  // within tol.not_psd or tr_out J differs from I_in by more than tol.cptp.
  ChoiMatrix(Index dim_in, Index dim_out, const HermitianOperator& j, const Tolerances& tol = {});

  Index dim_in() const noexcept { return dim_in_; }
  Index dim_out() const noexcept { return dim_out_; }
  const ComplexMatrix& matrix() const noexcept { return j_.matrix(); }
  const HermitianOperator& op() const noexcept { return j_; }

 private:
  Index dim_in_;
  Index dim_out_;
  HermitianOperator j_;
};

struct StinespringIsometry {
  Index dim_in = 0;
  Index dim_out = 0;
  Index dim_env = 0;
  // Rows ordered environment first: row e * dim_out + a.
  ComplexMatrix isometry;
};

ChoiMatrix kraus_to_choi(const KrausChannel& ch);

// Kraus operators from the eigenvectors of J with eigenvalues above tol.rank,
// so the Kraus rank is minimal.
KrausChannel choi_to_kraus(const ChoiMatrix& j, const Tolerances& tol = {});

// Same channel with a minimal Kraus set.
KrausChannel minimal_kraus(const KrausChannel& ch, const Tolerances& tol = {});

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

// outer o inner; Kraus operators O_j I_i ordered with the inner label major.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

// W = sum_i |i> (x) K_i.
StinespringIsometry stinespring(const KrausChannel& ch);

// rho -> tr_out(W rho W^dagger); output dimension equals the Kraus rank of ch.
KrausChannel complementary(const KrausChannel& ch);

// Partial trace over the factors in `discard` (0-based). Discarding every
// factor gives the trace functional with a 1-dimensional output.
KrausChannel trace_out_channel(const std::vector<Index>& dims, const std::vector<Index>& discard);

// rho -> tr(rho) sigma.
KrausChannel preparation_channel(Index dim_in, const DensityMatrix& sigma);

}  // namespace aqss
