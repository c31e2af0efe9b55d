#include <doctest.h>

#include "aqss/errors.hpp"
#include "aqss/recovery.hpp"
#include "aqss/scheme.hpp"
#include "support.hpp"

using namespace aqss;
using aqss::testing::random_channel;
using aqss::testing::random_density;

namespace {

double tp_residual(const ComplexMatrix& j, Index din, Index dout) {
  return (partial_trace(j, {din, dout}, {0}) - ComplexMatrix::Identity(din, din)).norm();
}

double min_eig(const ComplexMatrix& j) {
  return hermitian_eig(HermitianOperator(j)).values.minCoeff();
}

// F at the maximally entangled input, by index sums over the Choi matrix.
double entangled_fidelity(const KrausChannel& ch) {
  const ComplexMatrix j = kraus_to_choi(ch).matrix();
  const Index d = ch.dim_in();
  Complex s = 0;
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) s += j(i * d + i, k * d + k);
  return s.real() / double(d * d);
}

}  // namespace

TEST_CASE("dykstra_cptp_project") {
  std::mt19937_64 rng(50);
  SUBCASE("valid Choi is a fixed point") {
    const ComplexMatrix j = kraus_to_choi(random_channel(2, 3, 2, rng)).matrix();
    CHECK((dykstra_cptp_project(HermitianOperator(j), 2, 3).matrix() - j).norm() < 1e-8);
  }
  SUBCASE("identity matrix goes to the completely depolarizing Choi") {
    const ChoiMatrix out = dykstra_cptp_project(HermitianOperator::identity(6), 2, 3);
    CHECK((out.matrix() - ComplexMatrix::Identity(6, 6) / 3.0).norm() < 1e-9);
    CHECK(tp_residual(out.matrix(), 2, 3) < 1e-9);
  }
  SUBCASE("perturbed Choi is projected nearby") {
    for (int t = 0; t < 10; ++t) {
      const ComplexMatrix j = kraus_to_choi(random_channel(2, 2, 2, rng)).matrix();
      ComplexMatrix delta = aqss::testing::random_hermitian(4, rng);
      delta *= 0.1 / delta.norm();
      const ComplexMatrix out = dykstra_cptp_project(HermitianOperator(j + delta), 2, 2).matrix();
      CHECK((out - j).norm() <= 0.2);
      CHECK(tp_residual(out, 2, 2) < 1e-8);
      CHECK(min_eig(out) > -1e-8);
    }
  }
}

TEST_CASE("worst_case_input") {
  SUBCASE("identity") {
    CHECK(worst_case_input(KrausChannel::identity(3)).fidelity == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("completely depolarizing qubit") {
    const WorstCaseInput w = worst_case_input(depolarizing(2, 1.0));
    CHECK(w.fidelity == doctest::Approx(0.25).epsilon(1e-9));
    CHECK((w.reference.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-4);
    CHECK(entangled_fidelity(depolarizing(2, 1.0)) == doctest::Approx(0.25));
  }
  SUBCASE("qubit dephasing decreases in p and is attained at the entangled input") {
    double prev = 1.0 + 1e-12;
    for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
      const KrausChannel ch = dephasing(2, p);
      const WorstCaseInput w = worst_case_input(ch);
      CHECK(w.fidelity <= prev);
      CHECK(w.fidelity == doctest::Approx(entangled_fidelity(ch)).epsilon(1e-8));
      CHECK(w.fidelity == doctest::Approx(1.0 - p / 2.0).epsilon(1e-8));
      prev = w.fidelity;
    }
  }
  SUBCASE("never above random pure inputs") {
    std::mt19937_64 rng(51);
    const KrausChannel ch = random_channel(2, 2, 3, rng);
    const WorstCaseInput w = worst_case_input(ch);
    CHECK(w.stationarity < 1e-8);
    for (int t = 0; t < 500; ++t) {
      const ComplexVector psi = aqss::testing::random_pure(4, rng);
      std::vector<ComplexMatrix> lifted;
      for (const auto& k : ch.kraus_ops())
        lifted.push_back(aqss::testing::kron(ComplexMatrix::Identity(2, 2), k));
      const ComplexMatrix out = aqss::testing::kraus_apply(lifted, psi * psi.adjoint());
      CHECK(w.fidelity <= (psi.adjoint() * out * psi)(0, 0).real() + 1e-10);
    }
  }
}

TEST_CASE("diamond_distance_lower") {
  CHECK(diamond_distance_lower(KrausChannel::identity(2)).value < 1e-10);
  CHECK(diamond_distance_lower(depolarizing(2, 1.0)).value == doctest::Approx(0.75).epsilon(1e-8));
}

TEST_CASE("optimize_recovery") {
  SUBCASE("identity") {
    const RecoveryResult r = optimize_recovery(KrausChannel::identity(2));
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(worst_case_input(r.recovery).fidelity == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("constant qubit channel reaches 1/4") {
    std::mt19937_64 rng(52);
    const KrausChannel c = preparation_channel(2, DensityMatrix(random_density(2, rng)));
    CHECK(optimize_recovery(c).fidelity == doctest::Approx(0.25).epsilon(1e-6));
  }
  SUBCASE("cgl23 with one share traced out") {
    const ThresholdScheme s = build_cgl_2_3_scheme();
    const EffectiveChannels e =
        effective_channels(s, uniform_attack("identity", 0.0, 3, 3), AuthorizedSet{{1, 2}});
    const RecoveryResult r = optimize_recovery(e.forward);
    CHECK(r.fidelity >= 1.0 - 1e-6);
    // The reported fidelity is an exact evaluation of the returned channel.
    CHECK(worst_case_input(compose(r.recovery, e.forward)).fidelity ==
          doctest::Approx(r.fidelity).epsilon(1e-8));
  }
}

TEST_CASE("recovery gradient matches finite differences") {
  std::mt19937_64 rng(53);
  const Index q = 2, m = 3;
  const ComplexMatrix jn = kraus_to_choi(random_channel(q, m, 2, rng)).matrix();
  const ComplexMatrix jr = kraus_to_choi(random_channel(m, q, 2, rng)).matrix();
  const ComplexMatrix p = random_density(q, rng);
  const ComplexVector v = Eigen::Map<const ComplexVector>(ComplexMatrix(p.transpose()).data(), q * q);
  const auto loss = [&](const ComplexMatrix& r) {
    return (v.adjoint() * detail::link_choi(jn, r, q, m) * v)(0, 0).real();
  };
  const ComplexMatrix g = detail::recovery_gradient(jn, p, q, m);
  const ComplexMatrix h = aqss::testing::random_hermitian(m * q, rng);
  const double fd = (loss(jr + 1e-6 * h) - loss(jr - 1e-6 * h)) / 2e-6;
  CHECK((g * h).trace().real() == doctest::Approx(fd).epsilon(1e-6));
}
