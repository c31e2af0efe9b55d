#include "aqss/channels.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace aqss {

namespace {

void check_shapes(Index dim_in, Index dim_out, const std::vector<ComplexMatrix>& ops) {
  if (dim_in <= 0 || dim_out <= 0) throw ShapeError("channel dimensions must be positive");
  if (ops.empty()) throw ShapeError("channel needs at least one Kraus operator");
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].rows() != dim_out || ops[k].cols() != dim_in) {
      std::ostringstream os;
      os << "Kraus operator " << k << " is " << ops[k].rows() << "x" << ops[k].cols()
         << ", expected " << dim_out << "x" << dim_in;
      throw ShapeError(os.str());
    }
  }
}

ComplexMatrix choi_of(Index dim_in, Index dim_out, const std::vector<ComplexMatrix>& ops) {
  const Index n = dim_in * dim_out;
  ComplexMatrix vs(n, static_cast<Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (Index i = 0; i < dim_in; ++i)
      for (Index a = 0; a < dim_out; ++a) vs(i * dim_out + a, static_cast<Index>(k)) = ops[k](a, i);
  return vs * vs.adjoint();
}

double spectral_norm_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("spectral norm: eig failed");
  return es.eigenvalues().size() ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
}

double tp_residual(Index dim_in, const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix s = -ComplexMatrix::Identity(dim_in, dim_in);
  for (const auto& k : ops) s += k.adjoint() * k;
  return spectral_norm_hermitian(s);
}

double min_eigenvalue(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eig failed");
  return es.eigenvalues()(0);
}

}  // namespace

CptpDiagnostics validate_cptp(Index dim_in, Index dim_out, const std::vector<ComplexMatrix>& ops,
                              const Tolerances& tol) {
  check_shapes(dim_in, dim_out, ops);
  CptpDiagnostics d;
  d.tp_residual = tp_residual(dim_in, ops);
  d.choi_min_eigenvalue = min_eigenvalue(choi_of(dim_in, dim_out, ops));
  d.passed = d.tp_residual <= tol.cptp && d.choi_min_eigenvalue >= -tol.not_psd;
  return d;
}

CptpDiagnostics validate_cptp(const KrausChannel& ch, const Tolerances& tol) {
  return validate_cptp(ch.dim_in(), ch.dim_out(), ch.kraus_ops(), tol);
}

// --- KrausChannel ---------------------------------------------------------

KrausChannel::KrausChannel(Index dim_in, Index dim_out, std::vector<ComplexMatrix> ops,
                           const Tolerances& tol)
    : dim_in_(dim_in), dim_out_(dim_out), ops_(std::move(ops)) {
  check_shapes(dim_in_, dim_out_, ops_);
  for (const auto& k : ops_)
    if (!k.allFinite()) throw ShapeError("Kraus operator has non-finite entries");
  const double r = tp_residual(dim_in_, ops_);
  if (r > tol.cptp) {
    std::ostringstream os;
    os << "Kraus set is not trace preserving: ||sum K^dagger K - I|| = " << r;
    throw NotCptpError(os.str(), r, 0.0);
  }
}

KrausChannel KrausChannel::identity(Index dim) {
  return KrausChannel(dim, dim, {ComplexMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw ShapeError("unitary: matrix must be square");
  return KrausChannel(u.cols(), u.rows(), {u});
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) {
    std::ostringstream os;
    os << "apply: input is " << x.rows() << "x" << x.cols() << ", channel expects dim " << dim_in_;
    throw ShapeError(os.str());
  }
  ComplexMatrix y = ComplexMatrix::Zero(dim_out_, dim_out_);
  for (const auto& k : ops_) y.noalias() += k * x * k.adjoint();
  return y;
}

ComplexMatrix KrausChannel::apply_adjoint(const ComplexMatrix& y) const {
  if (y.rows() != dim_out_ || y.cols() != dim_out_) {
    throw ShapeError("apply_adjoint: operand does not match the channel output dimension");
  }
  ComplexMatrix x = ComplexMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : ops_) x.noalias() += k.adjoint() * y * k;
  return x;
}

// --- ChoiMatrix -----------------------------------------------------------

ChoiMatrix::ChoiMatrix(Index dim_in, Index dim_out, const HermitianOperator& j,
                       const Tolerances& tol)
    : dim_in_(dim_in), dim_out_(dim_out), j_(j) {
  if (dim_in <= 0 || dim_out <= 0 || j.dim() != dim_in * dim_out) {
    std::ostringstream os;
    os << "ChoiMatrix: matrix of dim " << j.dim() << " does not match " << dim_in << "*"
       << dim_out;
    throw ShapeError(os.str());
  }
  const double lmin = min_eigenvalue(j.matrix());
  const ComplexMatrix t = linalg::trace_second(j.matrix(), dim_in, dim_out) -
                          ComplexMatrix::Identity(dim_in, dim_in);
  const double r = spectral_norm_hermitian(t);
  if (lmin < -tol.not_psd || r > tol.cptp) {
    std::ostringstream os;
    os << "ChoiMatrix: not CPTP (min eigenvalue " << lmin << ", TP residual " << r << ")";
    throw NotCptpError(os.str(), r, lmin);
  }
}

// --- conversions ----------------------------------------------------------

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
  return ChoiMatrix(ch.dim_in(), ch.dim_out(),
                    HermitianOperator(choi_of(ch.dim_in(), ch.dim_out(), ch.kraus_ops())));
}

KrausChannel choi_to_kraus(const ChoiMatrix& j, const Tolerances& tol) {
  const EigenSystem es = hermitian_eig(j.op());
  const Index din = j.dim_in(), dout = j.dim_out();
  std::vector<ComplexMatrix> ops;
  for (Index k = 0; k < es.values.size(); ++k) {
    const double lam = es.values(k);
    if (lam <= tol.rank) break;
    ComplexMatrix op(dout, din);
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a) op(a, i) = std::sqrt(lam) * es.vectors(i * dout + a, k);
    ops.push_back(std::move(op));
  }
  if (ops.empty()) throw NumericalError("choi_to_kraus: Choi matrix has no eigenvalue above rank tolerance");
  return KrausChannel(din, dout, std::move(ops), tol);
}

KrausChannel minimal_kraus(const KrausChannel& ch, const Tolerances& tol) {
  const Index din = ch.dim_in(), dout = ch.dim_out(), r = ch.rank();
  if (r >= din * dout) return choi_to_kraus(kraus_to_choi(ch), tol);
  // J = M M^dagger with M the stacked Kraus vectors; the nonzero spectrum and
  // the scaled eigenvectors of J follow from the r x r Gram matrix M^dagger M.
  ComplexMatrix m(din * dout, r);
  for (Index k = 0; k < r; ++k)
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a) m(i * dout + a, k) = ch.kraus_ops()[k](a, i);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(linalg::hermitian_part(m.adjoint() * m));
  if (es.info() != Eigen::Success) throw NumericalError("minimal_kraus: eig failed");
  std::vector<ComplexMatrix> ops;
  for (Index k = r - 1; k >= 0; --k) {
    if (es.eigenvalues()(k) <= tol.rank) break;
    const ComplexVector v = m * es.eigenvectors().col(k);
    ComplexMatrix op(dout, din);
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a) op(a, i) = v(i * dout + a);
    ops.push_back(std::move(op));
  }
  if (ops.empty()) throw NumericalError("minimal_kraus: channel has zero Choi matrix");
  return KrausChannel(din, dout, std::move(ops), tol);
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    std::ostringstream os;
    os << "apply_channel: state of dim " << rho.dim() << " for channel input dim " << ch.dim_in();
    throw ShapeError(os.str());
  }
  return DensityMatrix(ch.apply(rho.matrix()));
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (inner.dim_out() != outer.dim_in()) {
    std::ostringstream os;
    os << "compose: inner output dim " << inner.dim_out() << " != outer input dim "
       << outer.dim_in();
    throw ShapeError(os.str());
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(inner.kraus_ops().size() * outer.kraus_ops().size());
  for (const auto& ki : inner.kraus_ops())
    for (const auto& ko : outer.kraus_ops()) ops.push_back(ko * ki);
  return KrausChannel(inner.dim_in(), outer.dim_out(), std::move(ops));
}

StinespringIsometry stinespring(const KrausChannel& ch) {
  StinespringIsometry s{ch.dim_in(), ch.dim_out(), ch.rank(),
                        ComplexMatrix(ch.rank() * ch.dim_out(), ch.dim_in())};
  for (Index e = 0; e < ch.rank(); ++e)
    s.isometry.block(e * ch.dim_out(), 0, ch.dim_out(), ch.dim_in()) = ch.kraus_ops()[e];
  return s;
}

KrausChannel complementary(const KrausChannel& ch) {
  // Tracing the output of W leaves the environment; Kraus operator for output
  // label a has rows L_a[e, :] = K_e[a, :].
  const Index r = ch.rank();
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.dim_out());
  for (Index a = 0; a < ch.dim_out(); ++a) {
    ComplexMatrix l(r, ch.dim_in());
    for (Index e = 0; e < r; ++e) l.row(e) = ch.kraus_ops()[e].row(a);
    ops.push_back(std::move(l));
  }
  return KrausChannel(ch.dim_in(), r, std::move(ops));
}

KrausChannel trace_out_channel(const std::vector<Index>& dims, const std::vector<Index>& discard) {
  if (dims.empty()) throw ShapeError("trace_out_channel: empty factor list");
  for (Index d : dims)
    if (d <= 0) throw ShapeError("trace_out_channel: factor dimensions must be positive");
  if (discard.empty()) throw ShapeError("trace_out_channel: discard set must be nonempty");
  const Index nf = static_cast<Index>(dims.size());
  std::vector<bool> gone(dims.size(), false);
  for (Index f : discard) {
    if (f < 0 || f >= nf || gone[f]) throw ShapeError("trace_out_channel: bad discard index set");
    gone[f] = true;
  }
  const Index din = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  Index n_labels = 1, dout = 1;
  for (Index f = 0; f < nf; ++f) (gone[f] ? n_labels : dout) *= dims[f];

  std::vector<ComplexMatrix> ops;
  ops.reserve(n_labels);
  for (Index label = 0; label < n_labels; ++label) {
    // Decode the discarded digits of this label (row-major over discarded factors).
    std::vector<Index> digit(dims.size(), 0);
    Index rest = label;
    for (Index f = nf - 1; f >= 0; --f)
      if (gone[f]) {
        digit[f] = rest % dims[f];
        rest /= dims[f];
      }
    ComplexMatrix op = ComplexMatrix::Zero(dout, din);
    for (Index out = 0; out < dout; ++out) {
      // Assemble the full input index from the kept digits of `out` and the label.
      Index r = out, in = 0, stride = 1;
      std::vector<Index> full(dims.size());
      for (Index f = nf - 1; f >= 0; --f)
        if (!gone[f]) {
          full[f] = r % dims[f];
          r /= dims[f];
        } else {
          full[f] = digit[f];
        }
      for (Index f = nf - 1; f >= 0; --f) {
        in += full[f] * stride;
        stride *= dims[f];
      }
      op(out, in) = 1.0;
    }
    ops.push_back(std::move(op));
  }
  return KrausChannel(din, dout, std::move(ops));
}

KrausChannel preparation_channel(Index dim_in, const DensityMatrix& sigma) {
  if (dim_in <= 0) throw ShapeError("preparation_channel: input dimension must be positive");
  const EigenSystem es = hermitian_eig(sigma.op());
  std::vector<ComplexMatrix> ops;
  for (Index j = 0; j < es.values.size(); ++j) {
    const double lam = es.values(j);
    if (lam <= 0.0) continue;
    for (Index i = 0; i < dim_in; ++i) {
      ComplexMatrix op = ComplexMatrix::Zero(sigma.dim(), dim_in);
      op.col(i) = std::sqrt(lam) * es.vectors.col(j);
      ops.push_back(std::move(op));
    }
  }
  return KrausChannel(dim_in, sigma.dim(), std::move(ops));
}

}  // namespace aqss
