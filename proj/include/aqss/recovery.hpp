#pragma once

// Worst-case input fidelity, a heuristic diamond-distance lower estimate and
// the primal search for the best recovery channel.
//
// For a channel M on dimension d and a reference state P, the input
// psi = (sqrt(P) (x) I) Phi gives <psi|(1 (x) M)(psi psi^dagger)|psi> =
// vec(P)^dagger J_M vec(P), a convex function of P. Minimizing over P is
// therefore an exact convex program for F_diamond(M, id).

#include "aqss/optim.hpp"
#include "aqss/channels.hpp"

namespace aqss {

// Alternating projections with Dykstra corrections between the PSD cone and
// {tr_out J = I_in}. NumericalError when both residuals stay above tol after
// max_iters.
ChoiMatrix dykstra_cptp_project(const HermitianOperator& x, Index dim_in, Index dim_out,
                                double tol = 1e-10, int max_iters = 20000);

struct WorstCaseInput {
  double fidelity = 1.0;
  PureState psi = PureState::normalized(ComplexVector::Ones(1));  // reference first
  DensityMatrix reference = DensityMatrix::maximally_mixed(1);    // P
  double stationarity = 0.0;  // tr(G P) - lambda_min(G): bound on the suboptimality
  bool converged = false;
};

// F_diamond(M, id) for a channel given by its Choi matrix (dim d*d).
WorstCaseInput min_input_fidelity(const ComplexMatrix& choi, Index d, const SolverConfig& cfg = {});
WorstCaseInput worst_case_input(const KrausChannel& f, const SolverConfig& cfg = {});

struct DiamondEstimate {
  double value = 0.0;  // max over explored inputs of the trace distance to the identity output
  PureState psi = PureState::normalized(ComplexVector::Ones(1));
};

// Local maximization of 1/2 ||(1 (x) (F - id))(psi psi^dagger)||_1 over pure inputs
// from the worst-fidelity input, the maximally entangled state and
// cfg.restarts random starts. A lower bound on D_diamond(F, id).
DiamondEstimate diamond_distance_lower(const KrausChannel& f, const SolverConfig& cfg = {});

struct RecoveryResult {
  double fidelity = 0.0;  // F_diamond(R* o N, id)
  KrausChannel recovery = KrausChannel::identity(1);
  PureState worst_input = PureState::normalized(ComplexVector::Ones(1));
  int iterations = 0;
  bool converged = false;
};

// max_R F_diamond(R o N, id) over channels R from N's output back to its
// input. Extragradient on the convex-concave L(J_R, P) with Dykstra
// projections, iterate averaging, and exact evaluation of every candidate.
RecoveryResult optimize_recovery(const KrausChannel& n, const SolverConfig& cfg = {});

namespace detail {

// J_{R o N} from J_N (q x m) and J_R (m x q).
ComplexMatrix link_choi(const ComplexMatrix& jn, const ComplexMatrix& jr, Index q, Index m);
// dL/dJ_R at reference state P.
ComplexMatrix recovery_gradient(const ComplexMatrix& jn, const ComplexMatrix& p, Index q, Index m);

}  // namespace detail

}  // namespace aqss
