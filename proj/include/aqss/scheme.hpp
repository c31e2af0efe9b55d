#pragma once

// Threshold secret-sharing schemes, attack models on the shares and the
// effective channels seen by an authorized set and by its complement.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aqss/channels.hpp"

namespace aqss {

// Largest share-space dimension d^n accepted anywhere.
inline constexpr Index kMaxShareSpaceDim = 729;

class ThresholdScheme {
 public:
  // encoder: single-Kraus isometry q -> d^n. Throws DomainError for bad
  // (t, n) or when d^n exceeds kMaxShareSpaceDim, ShapeError on dimensions.
  ThresholdScheme(int t, int n, Index secret_dim, Index share_dim, KrausChannel encoder);

  int t() const noexcept { return t_; }
  int n() const noexcept { return n_; }
  Index secret_dim() const noexcept { return q_; }
  Index share_dim() const noexcept { return d_; }
  Index share_space_dim() const noexcept { return encoder_.dim_out(); }
  const KrausChannel& encoder() const noexcept { return encoder_; }
  const ComplexMatrix& isometry() const noexcept { return encoder_.kraus_ops().front(); }

 private:
  int t_, n_;
  Index q_, d_;
  KrausChannel encoder_;
};

// Either a product of per-share channels or a global channel on d^n.
class AttackModel {
 public:
  static AttackModel global(KrausChannel attack, std::string label,
                            std::map<std::string, double> parameters = {});
  static AttackModel product(std::vector<KrausChannel> per_share, std::string label,
                             std::map<std::string, double> parameters = {});

  const std::string& label() const noexcept { return label_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }
  bool is_product() const noexcept { return !factors_.empty(); }
  const std::vector<KrausChannel>& factors() const noexcept { return factors_; }
  Index dim() const noexcept { return dim_; }

  // The attack as one Kraus channel on d^n. Product attacks are expanded into
  // all tensor products; throws DomainError past 4096 Kraus operators.
  KrausChannel channel() const;

 private:
  AttackModel() = default;
  std::optional<KrausChannel> global_;
  std::vector<KrausChannel> factors_;
  std::string label_;
  std::map<std::string, double> parameters_;
  Index dim_ = 0;
};

// Players are numbered 1..n.
struct AuthorizedSet {
  std::vector<int> members;

  std::vector<int> complement(int n) const;
  std::string to_string() const;
  bool operator==(const AuthorizedSet&) const = default;
};

struct EffectiveChannels {
  KrausChannel forward;     // secret -> shares of A
  KrausChannel complement;  // secret -> environment of forward
};

// ((2,3)) qutrit scheme: |k> -> sum_j |j, j+k, j+2k mod 3> / sqrt(3).
ThresholdScheme build_cgl_2_3_scheme();

// Single-share noise families, p in [0, 1] (DomainError otherwise).
KrausChannel depolarizing(Index d, double p);
KrausChannel dephasing(Index d, double p);
KrausChannel erasure(Index d, double p);

// Weyl operator X^a Z^b on dimension d.
ComplexMatrix weyl(Index d, Index a, Index b);

// Throws ShapeError when the count or a factor dimension is wrong.
AttackModel product_attack(const std::vector<KrausChannel>& per_share, int n, Index d,
                           std::string label = "product",
                           std::map<std::string, double> parameters = {});

// Named attack on every share: "identity", "depolarizing", "dephasing",
// "erasure". DomainError for unknown names.
AttackModel uniform_attack(const std::string& family, double p, int n, Index d);

// DomainError if |A| < t or a member is outside 1..n. Both channels are
// compressed to minimal Kraus rank.
EffectiveChannels effective_channels(const ThresholdScheme& scheme, const AttackModel& attack,
                                     const AuthorizedSet& a, const Tolerances& tol = {});

// Subsets of size exactly t, lexicographic.
std::vector<AuthorizedSet> min_authorized_sets(const ThresholdScheme& scheme);
// Subsets of size t..n, by size then lexicographic.
std::vector<AuthorizedSet> all_authorized_sets(const ThresholdScheme& scheme);

}  // namespace aqss
