#include <doctest.h>

#include "aqss/qfunction.hpp"
#include "aqss/saddle.hpp"
#include "aqss/scheme.hpp"
#include "support.hpp"

using namespace aqss;
using aqss::testing::random_channel;
using aqss::testing::random_density;

namespace {

ComplexMatrix bloch(double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m << Complex(1 + z, 0), Complex(x, -y), Complex(x, y), Complex(1 - z, 0);
  return m / 2.0;
}

// Central difference of f along the Hermitian direction h.
template <class F>
double directional(F&& f, const ComplexMatrix& x, const ComplexMatrix& h, double eps = 1e-6) {
  return (f(x + eps * h) - f(x - eps * h)) / (2.0 * eps);
}

}  // namespace

TEST_CASE("q kernel gradients match finite differences") {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(2 + t % 2, 2 + t % 3, 1 + t % 3, rng);
    const QKernel k(kraus_to_choi(ch));
    const ComplexMatrix rho = random_density(ch.dim_in(), rng);
    const ComplexMatrix sigma = random_density(ch.dim_out(), rng);
    ComplexMatrix gr, gs;
    const double q = k.grad_rho(rho, sigma, &gr);
    CHECK(q == doctest::Approx(k.value(rho, sigma)).epsilon(1e-12));
    k.grad_sigma(rho, sigma, &gs);
    const ComplexMatrix hr = aqss::testing::random_hermitian(ch.dim_in(), rng);
    const ComplexMatrix hs = aqss::testing::random_hermitian(ch.dim_out(), rng);
    const double fr = directional([&](const ComplexMatrix& r) { return k.value(r, sigma); }, rho, hr);
    const double fs = directional([&](const ComplexMatrix& s) { return k.value(rho, s); }, sigma, hs);
    CHECK((gr * hr).trace().real() == doctest::Approx(fr).epsilon(1e-6));
    CHECK((gs * hs).trace().real() == doctest::Approx(fs).epsilon(1e-6));
    // Homogeneity: q(c rho, sigma) = c q and q(rho, c sigma) = sqrt(c) q.
    CHECK(k.value(2.0 * rho, sigma) == doctest::Approx(2.0 * q).epsilon(1e-12));
    CHECK(k.value(rho, 4.0 * sigma) == doctest::Approx(2.0 * q).epsilon(1e-12));
    CHECK((gr * rho).trace().real() == doctest::Approx(q).epsilon(1e-9));
    CHECK((gs * sigma).trace().real() == doctest::Approx(q / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("factor parametrization gradient") {
  std::mt19937_64 rng(41);
  const ComplexMatrix g = aqss::testing::random_hermitian(3, rng);
  const auto f = [&](const RealVector& x) {
    return (g * factor::density(factor::unpack(x, 3))).trace().real();
  };
  const ComplexMatrix a = factor::random(3, rng);
  const RealVector x = factor::pack(a);
  const RealVector grad = factor::gradient(a, factor::density(a), g);
  for (Index i = 0; i < x.size(); ++i) {
    RealVector e = RealVector::Zero(x.size());
    e(i) = 1e-6;
    CHECK(grad(i) == doctest::Approx((f(x + e) - f(x - e)) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("q convex in rho and concave in sigma") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const KrausChannel ch = random_channel(2 + t % 2, 2 + t % 3, 1 + t % 3, rng);
    const QKernel k(kraus_to_choi(ch));
    const ComplexMatrix r1 = random_density(ch.dim_in(), rng), r2 = random_density(ch.dim_in(), rng);
    const ComplexMatrix s1 = random_density(ch.dim_out(), rng), s2 = random_density(ch.dim_out(), rng);
    const double l = u(rng);
    CHECK(k.value(l * r1 + (1 - l) * r2, s1) <= l * k.value(r1, s1) + (1 - l) * k.value(r2, s1) + 1e-9);
    CHECK(k.value(r1, l * s1 + (1 - l) * s2) >= l * k.value(r1, s1) + (1 - l) * k.value(r1, s2) - 1e-9);
  }
}

TEST_CASE("min_rho_q") {
  std::mt19937_64 rng(43);
  SUBCASE("constant channel at its output") {
    const ComplexMatrix s0 = random_density(2, rng);
    const ChoiMatrix j = kraus_to_choi(preparation_channel(3, DensityMatrix(s0)));
    const MinRhoResult r = min_rho_q(DensityMatrix(s0), j);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("qubit identity at sigma = I/2 against a Bloch grid") {
    const ChoiMatrix j = kraus_to_choi(KrausChannel::identity(2));
    const DensityMatrix half = DensityMatrix::maximally_mixed(2);
    const MinRhoResult r = min_rho_q(half, j);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-9));
    CHECK((r.rho.matrix() - half.matrix()).norm() < 1e-4);
    double grid = 1e300;
    for (int i = -10; i <= 10; ++i)
      for (int k = -10; k <= 10; ++k)
        for (int l = -10; l <= 10; ++l) {
          const double x = i / 10.0, y = k / 10.0, z = l / 10.0;
          if (x * x + y * y + z * z > 1.0) continue;
          const double q = aqss::testing::q_ref(j.matrix(), bloch(x, y, z), half.matrix());
          grid = std::min(grid, q * q);
        }
    CHECK(r.value <= grid + 1e-12);
    CHECK(grid - r.value < 1e-12);
  }
  SUBCASE("random complement channel against Monte Carlo samples") {
    const KrausChannel ch = complementary(random_channel(2, 2, 2, rng));
    const ChoiMatrix j = kraus_to_choi(ch);
    const ComplexMatrix sigma = random_density(ch.dim_out(), rng);
    const MinRhoResult r = min_rho_q(DensityMatrix(sigma), j);
    double sampled = 1e300;
    for (int s = 0; s < 10000; ++s) {
      const ComplexMatrix rho = random_density(2, rng);
      const double q = aqss::testing::q_ref(j.matrix(), rho, sigma);
      sampled = std::min(sampled, q * q);
    }
    CHECK(r.value <= sampled + 1e-4);
    CHECK(r.stationarity < 1e-6);
    CHECK(r.converged);
  }
}

TEST_CASE("maximize_sigma") {
  std::mt19937_64 rng(44);
  const KrausChannel ch = random_channel(2, 3, 2, rng);
  const ChoiMatrix j = kraus_to_choi(ch);
  const ComplexMatrix rho = random_density(2, rng);
  const MaxSigmaResult r = maximize_sigma(DensityMatrix(rho), j);
  for (int s = 0; s < 2000; ++s)
    CHECK(aqss::testing::q_ref(j.matrix(), rho, random_density(3, rng)) <= r.value + 1e-10);
  CHECK(r.stationarity < 1e-6);
}

TEST_CASE("saddle_max_sigma_min_rho") {
  std::mt19937_64 rng(45);
  SUBCASE("constant channel") {
    const ChoiMatrix j = kraus_to_choi(preparation_channel(2, DensityMatrix(random_density(3, rng))));
    const SaddleResult s = saddle_max_sigma_min_rho(j);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.gap < 1e-10);
  }
  SUBCASE("identity channel") {
    for (Index d : {2, 3}) {
      const SaddleResult s = saddle_max_sigma_min_rho(kraus_to_choi(KrausChannel::identity(d)));
      CHECK(s.value == doctest::Approx(1.0 / double(d)).epsilon(1e-8));
      const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / double(d);
      CHECK((s.rho_star.matrix() - mixed).norm() < 1e-4);
      CHECK((s.sigma_star.matrix() - mixed).norm() < 1e-4);
      CHECK(s.converged);
    }
  }
  SUBCASE("cgl23 complement under the identity attack") {
    const ThresholdScheme scheme = build_cgl_2_3_scheme();
    const EffectiveChannels e = effective_channels(scheme, uniform_attack("identity", 0.0, 3, 3),
                                                   AuthorizedSet{{1, 3}});
    CHECK(saddle_max_sigma_min_rho(kraus_to_choi(e.complement)).value ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("bracket on random channels") {
    for (int t = 0; t < 10; ++t) {
      const ChoiMatrix j = kraus_to_choi(random_channel(2 + t % 2, 2 + t % 3, 1 + t % 3, rng));
      const SaddleResult s = saddle_max_sigma_min_rho(j);
      CHECK(s.maxmin_value <= s.minmax_value + 1e-12);
      CHECK(s.gap <= 2e-5);
      // The certificates are attained values at the returned points.
      const QKernel k(j);
      CHECK(k.value(s.rho_star.matrix(), s.sigma_star.matrix()) >= s.maxmin_value - 1e-9);
      CHECK(k.value(s.rho_star.matrix(), s.sigma_star.matrix()) <= s.minmax_value + 1e-9);
    }
  }
}

TEST_CASE("saddle is reproducible for a fixed seed") {
  std::mt19937_64 rng(46);
  const ChoiMatrix j = kraus_to_choi(random_channel(3, 2, 3, rng));
  const SaddleResult a = saddle_max_sigma_min_rho(j), b = saddle_max_sigma_min_rho(j);
  CHECK(a.maxmin_value == b.maxmin_value);
  CHECK(a.minmax_value == b.minmax_value);
}
