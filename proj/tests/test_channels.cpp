#include <doctest.h>

#include "aqss/channels.hpp"
#include "aqss/divergences.hpp"
#include "aqss/errors.hpp"
#include "aqss/scheme.hpp"
#include "support.hpp"

using namespace aqss;
using aqss::testing::random_channel;
using aqss::testing::random_density;

TEST_CASE("kraus_to_choi") {
  SUBCASE("identity is d |Phi><Phi|") {
    const ChoiMatrix j = kraus_to_choi(KrausChannel::identity(3));
    ComplexVector phi = ComplexVector::Zero(9);
    for (Index i = 0; i < 3; ++i) phi(i * 3 + i) = 1.0;
    CHECK((j.matrix() - phi * phi.adjoint()).norm() < 1e-14);
    CHECK(j.matrix().trace().real() == doctest::Approx(3.0));
  }
  SUBCASE("preparation channel is I (x) sigma0") {
    std::mt19937_64 rng(10);
    const ComplexMatrix s0 = random_density(3, rng);
    const ChoiMatrix j = kraus_to_choi(preparation_channel(2, DensityMatrix(s0)));
    CHECK((j.matrix() - aqss::testing::kron(ComplexMatrix::Identity(2, 2), s0)).norm() < 1e-12);
  }
  SUBCASE("Choi contraction matches Kraus application") {
    std::mt19937_64 rng(11);
    const KrausChannel ch = random_channel(2, 2, 2, rng);
    const ChoiMatrix j = kraus_to_choi(ch);
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix rho = random_density(2, rng);
      const ComplexMatrix a = aqss::testing::choi_apply(j.matrix(), 2, 2, rho);
      const ComplexMatrix b = aqss::testing::kraus_apply(ch.kraus_ops(), rho);
      CHECK((a - b).norm() < 1e-9);
    }
  }
}

TEST_CASE("choi_to_kraus") {
  SUBCASE("identity gives one Kraus operator proportional to I") {
    const KrausChannel k = choi_to_kraus(kraus_to_choi(KrausChannel::identity(2)));
    REQUIRE(k.rank() == 1);
    const ComplexMatrix op = k.kraus_ops()[0];
    CHECK((op - op(0, 0) * ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(std::abs(std::abs(op(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("completely depolarizing qubit channel") {
    const KrausChannel k = choi_to_kraus(kraus_to_choi(depolarizing(2, 1.0)));
    CHECK(k.rank() == 4);
    CHECK(validate_cptp(k).passed);
    for (Index i = 0; i < 2; ++i) {
      const DensityMatrix out = apply_channel(k, DensityMatrix::basis_state(2, i));
      CHECK((out.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    }
  }
  SUBCASE("round trip on random channels") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
      const ChoiMatrix j = kraus_to_choi(random_channel(3, 2, 3, rng));
      const ChoiMatrix back = kraus_to_choi(choi_to_kraus(j));
      CHECK((back.matrix() - j.matrix()).norm() < 1e-8);
    }
  }
  SUBCASE("minimal_kraus keeps the channel and reduces the rank") {
    std::mt19937_64 rng(13);
    const KrausChannel ch = random_channel(2, 2, 2, rng);
    std::vector<ComplexMatrix> ops;
    for (const auto& k : ch.kraus_ops()) {
      ops.push_back(k / std::sqrt(2.0));
      ops.push_back(k / std::sqrt(2.0));
    }
    const KrausChannel redundant(2, 2, ops);
    const KrausChannel m = minimal_kraus(redundant);
    CHECK(m.rank() == 2);
    CHECK((kraus_to_choi(m).matrix() - kraus_to_choi(ch).matrix()).norm() < 1e-10);
  }
}

TEST_CASE("apply_channel") {
  std::mt19937_64 rng(14);
  const DensityMatrix rho(random_density(3, rng));
  CHECK((apply_channel(KrausChannel::identity(3), rho).matrix() - rho.matrix()).norm() < 1e-14);
  CHECK((apply_channel(depolarizing(3, 1.0), rho).matrix() - ComplexMatrix::Identity(3, 3) / 3.0)
            .norm() < 1e-12);
  ComplexVector plus = ComplexVector::Ones(2) / std::sqrt(2.0);
  const DensityMatrix out = apply_channel(dephasing(2, 1.0), DensityMatrix::from_vector(plus));
  CHECK((out.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
  CHECK_THROWS_AS(apply_channel(KrausChannel::identity(2), rho), ShapeError);
}

TEST_CASE("compose") {
  std::mt19937_64 rng(15);
  const KrausChannel a = random_channel(2, 2, 2, rng), b = random_channel(2, 2, 3, rng);
  SUBCASE("identity outer") {
    const KrausChannel c = compose(KrausChannel::identity(2), a);
    CHECK((kraus_to_choi(c).matrix() - kraus_to_choi(a).matrix()).norm() < 1e-12);
  }
  SUBCASE("preparation outer is constant") {
    const ComplexMatrix s0 = random_density(3, rng);
    const KrausChannel c = compose(preparation_channel(2, DensityMatrix(s0)), a);
    for (int k = 0; k < 5; ++k) {
      const DensityMatrix rho(random_density(2, rng));
      CHECK((apply_channel(c, rho).matrix() - s0).norm() < 1e-12);
    }
  }
  SUBCASE("sequential application") {
    const KrausChannel c = compose(b, a);
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix rho = random_density(2, rng);
      const ComplexMatrix seq =
          aqss::testing::kraus_apply(b.kraus_ops(), aqss::testing::kraus_apply(a.kraus_ops(), rho));
      CHECK((apply_channel(c, DensityMatrix(rho)).matrix() - seq).norm() < 1e-10);
    }
  }
  CHECK_THROWS_AS(compose(KrausChannel::identity(3), a), ShapeError);
}

TEST_CASE("complementary") {
  std::mt19937_64 rng(16);
  SUBCASE("identity and unitaries have constant rank-one complements") {
    for (const KrausChannel& ch :
         {KrausChannel::identity(3), KrausChannel::unitary(aqss::testing::random_unitary(3, rng))}) {
      const KrausChannel c = complementary(ch);
      CHECK(c.dim_out() == 1);
      for (int k = 0; k < 5; ++k) {
        const DensityMatrix out = apply_channel(c, DensityMatrix(random_density(3, rng)));
        CHECK(std::abs(out.matrix()(0, 0) - 1.0) < 1e-12);
      }
    }
  }
  SUBCASE("double complement is isometric to the channel") {
    // q(rho, sigma) is invariant under an isometry V on the output when sigma
    // is transported along: q_{V N V^dag}(rho, V sigma V^dag) = q_N(rho, sigma).
    for (int t = 0; t < 5; ++t) {
      const KrausChannel ch = random_channel(2, 3, 2, rng);
      const KrausChannel cc = complementary(complementary(ch));
      const DensityMatrix rho(random_density(2, rng));
      // Both channels have the same output (as operators) up to an isometry,
      // so their output spectra agree on every input.
      const DensityMatrix a = apply_channel(ch, rho), b = apply_channel(cc, rho);
      CHECK(von_neumann_entropy(a) == doctest::Approx(von_neumann_entropy(b)).epsilon(1e-8));
      // The best sigma value max_sigma q agrees between the two.
      const RenyiHalfInfo ia = mutual_info_renyi_half(ch, rho);
      const RenyiHalfInfo ib = mutual_info_renyi_half(cc, rho);
      CHECK(ia.value == doctest::Approx(ib.value).epsilon(1e-8));
    }
  }
  SUBCASE("complement of a preparation channel reveals the input") {
    const KrausChannel prep = preparation_channel(2, DensityMatrix(random_density(2, rng)));
    const KrausChannel c = complementary(prep);
    // The complement is an isometric copy of the identity: its Renyi-1/2
    // information at the maximally mixed input equals 2 log 2.
    const RenyiHalfInfo info = mutual_info_renyi_half(c, DensityMatrix::maximally_mixed(2));
    CHECK(info.value == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-8));
  }
}

TEST_CASE("trace_out_channel") {
  std::mt19937_64 rng(17);
  CHECK_THROWS_AS(trace_out_channel({2, 2}, {}), ShapeError);
  const KrausChannel all = trace_out_channel({2}, {0});
  CHECK(all.dim_out() == 1);
  const ComplexMatrix rho = random_density(2, rng), sigma = random_density(2, rng);
  const KrausChannel drop2 = trace_out_channel({2, 2}, {1});
  CHECK((drop2.apply(aqss::testing::kron(rho, sigma)) - rho).norm() < 1e-12);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix m = random_density(12, rng);
    const KrausChannel ch = trace_out_channel({2, 3, 2}, {1});
    CHECK((ch.apply(m) - partial_trace(m, {2, 3, 2}, {0, 2})).norm() < 1e-12);
  }
}

TEST_CASE("preparation_channel") {
  std::mt19937_64 rng(18);
  const ComplexMatrix s0 = random_density(2, rng);
  const KrausChannel prep = preparation_channel(3, DensityMatrix(s0));
  for (int k = 0; k < 5; ++k)
    CHECK((apply_channel(prep, DensityMatrix(random_density(3, rng))).matrix() - s0).norm() < 1e-12);
}

TEST_CASE("validate_cptp") {
  const CptpDiagnostics id = validate_cptp(KrausChannel::identity(2));
  CHECK(id.passed);
  CHECK(id.tp_residual < 1e-14);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const CptpDiagnostics twice = validate_cptp(2, 2, {i2, i2});
  CHECK_FALSE(twice.passed);
  CHECK(twice.tp_residual == doctest::Approx(1.0));
  const CptpDiagnostics scaled = validate_cptp(2, 2, {0.999 * i2});
  CHECK_FALSE(scaled.passed);
  CHECK(scaled.tp_residual == doctest::Approx(1.0 - 0.999 * 0.999).epsilon(1e-9));
  CHECK_THROWS_AS(KrausChannel(2, 2, {i2, i2}), NotCptpError);
  CHECK_THROWS_AS(validate_cptp(2, 3, {i2}), ShapeError);
}

TEST_CASE("stinespring isometry") {
  std::mt19937_64 rng(19);
  const KrausChannel ch = random_channel(2, 3, 2, rng);
  const StinespringIsometry w = stinespring(ch);
  CHECK(w.dim_env == 2);
  CHECK((w.isometry.adjoint() * w.isometry - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
}
