#include "aqss/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace aqss {

namespace {

constexpr std::size_t kMaxExpandedKraus = 4096;

Index ipow(Index b, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << "parameter out of range [0,1]: " << p;
    throw DomainError(os.str());
  }
}

ComplexMatrix embed(const ComplexMatrix& op, Index left, Index right) {
  return linalg::kron(linalg::kron(ComplexMatrix::Identity(left, left), op),
                      ComplexMatrix::Identity(right, right));
}

void validate_set(const AuthorizedSet& a, int n) {
  if (a.members.empty()) throw DomainError("authorized set is empty");
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    if (a.members[i] < 1 || a.members[i] > n)
      throw DomainError("player " + std::to_string(a.members[i]) + " outside 1.." +
                        std::to_string(n));
    if (i > 0 && a.members[i] <= a.members[i - 1])
      throw DomainError("authorized set members must be strictly increasing");
  }
}

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<AuthorizedSet>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back({cur});
    return;
  }
  for (int p = start; p <= n; ++p) {
    cur.push_back(p);
    subsets(n, k, p + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

// --- ThresholdScheme ------------------------------------------------------

ThresholdScheme::ThresholdScheme(int t, int n, Index secret_dim, Index share_dim,
                                 KrausChannel encoder)
    : t_(t), n_(n), q_(secret_dim), d_(share_dim), encoder_(std::move(encoder)) {
  if (n < 1 || t < 1 || t > n) throw DomainError("threshold requires 1 <= t <= n");
  if (q_ < 1 || d_ < 1) throw ShapeError("secret and share dimensions must be positive");
  // Overflow-safe d^n guard.
  Index dn = 1;
  for (int i = 0; i < n; ++i) {
    dn *= d_;
    if (dn > kMaxShareSpaceDim) {
      std::ostringstream os;
      os << "share space d^n = " << d_ << "^" << n << " exceeds the limit "
         << kMaxShareSpaceDim;
      throw DomainError(os.str());
    }
  }
  if (encoder_.dim_in() != q_ || encoder_.dim_out() != dn)
    throw ShapeError("encoder must map dimension q to d^n");
  if (encoder_.rank() != 1) throw DomainError("encoder must have exactly one Kraus operator");
}

// --- AttackModel ----------------------------------------------------------

AttackModel AttackModel::global(KrausChannel attack, std::string label,
                                std::map<std::string, double> parameters) {
  if (attack.dim_in() != attack.dim_out())
    throw ShapeError("attack must map the share space to itself");
  AttackModel m;
  m.dim_ = attack.dim_in();
  m.global_ = std::move(attack);
  m.label_ = std::move(label);
  m.parameters_ = std::move(parameters);
  return m;
}

AttackModel AttackModel::product(std::vector<KrausChannel> per_share, std::string label,
                                 std::map<std::string, double> parameters) {
  if (per_share.empty()) throw ShapeError("product attack needs at least one factor");
  AttackModel m;
  m.dim_ = 1;
  for (const auto& f : per_share) {
    if (f.dim_in() != f.dim_out()) throw ShapeError("per-share attack must preserve dimension");
    m.dim_ *= f.dim_in();
  }
  m.factors_ = std::move(per_share);
  m.label_ = std::move(label);
  m.parameters_ = std::move(parameters);
  return m;
}

KrausChannel AttackModel::channel() const {
  if (global_) return *global_;
  std::vector<ComplexMatrix> ops{ComplexMatrix::Identity(1, 1)};
  for (const auto& f : factors_) {
    if (ops.size() * f.kraus_ops().size() > kMaxExpandedKraus)
      throw DomainError("product attack too large to expand into a single Kraus set");
    std::vector<ComplexMatrix> next;
    for (const auto& a : ops)
      for (const auto& b : f.kraus_ops()) next.push_back(linalg::kron(a, b));
    ops.swap(next);
  }
  return KrausChannel(dim_, dim_, std::move(ops));
}

// --- AuthorizedSet --------------------------------------------------------

std::vector<int> AuthorizedSet::complement(int n) const {
  std::vector<int> out;
  for (int p = 1; p <= n; ++p)
    if (std::find(members.begin(), members.end(), p) == members.end()) out.push_back(p);
  return out;
}

std::string AuthorizedSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(members[i]);
  }
  return s + "}";
}

// --- constructors ---------------------------------------------------------

ThresholdScheme build_cgl_2_3_scheme() {
  ComplexMatrix v = ComplexMatrix::Zero(27, 3);
  const double amp = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      const int s1 = j, s2 = (j + k) % 3, s3 = (j + 2 * k) % 3;
      v(s1 * 9 + s2 * 3 + s3, k) = amp;
    }
  return ThresholdScheme(2, 3, 3, 3, KrausChannel(3, 27, {v}));
}

ComplexMatrix weyl(Index d, Index a, Index b) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((b * j) % d) / d;
    m((j + a) % d, j) = std::polar(1.0, phase);
  }
  return m;
}

KrausChannel depolarizing(Index d, double p) {
  check_p(p);
  const double dd = static_cast<double>(d * d);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p + p / dd) * ComplexMatrix::Identity(d, d)};
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      if (a || b) ops.push_back(std::sqrt(p / dd) * weyl(d, a, b));
  return KrausChannel(d, d, std::move(ops));
}

KrausChannel dephasing(Index d, double p) {
  check_p(p);
  const double dd = static_cast<double>(d);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p + p / dd) * ComplexMatrix::Identity(d, d)};
  for (Index k = 1; k < d; ++k) ops.push_back(std::sqrt(p / dd) * weyl(d, 0, k));
  return KrausChannel(d, d, std::move(ops));
}

KrausChannel erasure(Index d, double p) {
  check_p(p);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p) * ComplexMatrix::Identity(d, d)};
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = std::sqrt(p / static_cast<double>(d));
      ops.push_back(std::move(e));
    }
  return KrausChannel(d, d, std::move(ops));
}

AttackModel product_attack(const std::vector<KrausChannel>& per_share, int n, Index d,
                           std::string label, std::map<std::string, double> parameters) {
  if (static_cast<int>(per_share.size()) != n) {
    std::ostringstream os;
    os << "product_attack: " << per_share.size() << " factors for " << n << " shares";
    throw ShapeError(os.str());
  }
  for (const auto& f : per_share)
    if (f.dim_in() != d || f.dim_out() != d)
      throw ShapeError("product_attack: every factor must act on dimension " + std::to_string(d));
  return AttackModel::product(per_share, std::move(label), std::move(parameters));
}

AttackModel uniform_attack(const std::string& family, double p, int n, Index d) {
  check_p(p);
  KrausChannel f = KrausChannel::identity(d);
  if (family == "depolarizing") f = depolarizing(d, p);
  else if (family == "dephasing") f = dephasing(d, p);
  else if (family == "erasure") f = erasure(d, p);
  else if (family != "identity") throw DomainError("unknown attack family: " + family);
  return product_attack(std::vector<KrausChannel>(n, f), n, d, family, {{"p", p}});
}

// --- effective channels ---------------------------------------------------

EffectiveChannels effective_channels(const ThresholdScheme& scheme, const AttackModel& attack,
                                     const AuthorizedSet& a, const Tolerances& tol) {
  validate_set(a, scheme.n());
  if (static_cast<int>(a.members.size()) < scheme.t()) {
    std::ostringstream os;
    os << "set " << a.to_string() << " has fewer than t = " << scheme.t() << " players";
    throw DomainError(os.str());
  }
  if (attack.dim() != scheme.share_space_dim())
    throw ShapeError("attack dimension does not match the share space");

  const int n = scheme.n();
  const Index d = scheme.share_dim();
  std::vector<Index> dims(n, d);
  std::vector<Index> discard;
  for (int p : a.complement(n)) discard.push_back(p - 1);

  KrausChannel fwd = scheme.encoder();
  if (attack.is_product()) {
    // Factors on the discarded shares are trace preserving and drop out.
    if (!discard.empty()) fwd = minimal_kraus(compose(trace_out_channel(dims, discard), fwd), tol);
    const int k = static_cast<int>(a.members.size());
    for (int pos = 0; pos < k; ++pos) {
      const KrausChannel& f = attack.factors()[a.members[pos] - 1];
      std::vector<ComplexMatrix> ops;
      const Index left = ipow(d, pos), right = ipow(d, k - pos - 1);
      for (const auto& kop : f.kraus_ops()) ops.push_back(embed(kop, left, right));
      const Index dim = left * d * right;
      fwd = minimal_kraus(compose(KrausChannel(dim, dim, std::move(ops)), fwd), tol);
    }
  } else {
    fwd = minimal_kraus(compose(attack.channel(), fwd), tol);
    if (!discard.empty()) fwd = minimal_kraus(compose(trace_out_channel(dims, discard), fwd), tol);
  }
  KrausChannel comp = minimal_kraus(complementary(fwd), tol);
  return {std::move(fwd), std::move(comp)};
}

std::vector<AuthorizedSet> min_authorized_sets(const ThresholdScheme& scheme) {
  std::vector<AuthorizedSet> out;
  std::vector<int> cur;
  subsets(scheme.n(), scheme.t(), 1, cur, out);
  return out;
}

std::vector<AuthorizedSet> all_authorized_sets(const ThresholdScheme& scheme) {
  std::vector<AuthorizedSet> out;
  std::vector<int> cur;
  for (int k = scheme.t(); k <= scheme.n(); ++k) subsets(scheme.n(), k, 1, cur, out);
  return out;
}

}  // namespace aqss
