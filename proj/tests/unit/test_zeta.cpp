#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "zetares/error.hpp"
#include "zetares/zeta.hpp"

using namespace zr;

namespace {

double qabs(const oracle::ComplexQ& z) {
  return std::hypot(static_cast<double>(z.re), static_cast<double>(z.im));
}

}  // namespace

TEST_CASE("frozen reference values") {
  const ReferenceDetail z0 = zeta_reference_detail(0.75, 0, 30);
  CHECK(fabs_q(z0.value.re - (-3.441285386945222894Q)) < 1e-17Q);
  CHECK(fabs_q(z0.value.im) < 1e-30Q);
  const ZetaSample z100 = zeta_reference(0.75, 100, 20);
  CHECK(std::abs(z100.value) == doctest::Approx(2.003730378685101363).epsilon(1e-15));
  CHECK(z100.est_error < 1e-15);
}

TEST_CASE("reference against an independent MPFR Euler-Maclaurin") {
  for (double a : {0.55, 0.6, 0.75, 0.9, 0.99}) {
    for (double t : {0.0, 1.0, 14.134725, 50.0, 333.3, 1000.0, 5000.0}) {
      const ReferenceDetail d = zeta_reference_detail(a, t, 28);
      const oracle::ComplexQ o = oracle::zeta_mpfr(a, t);
      const double err = std::hypot(static_cast<double>(d.value.re - o.re), static_cast<double>(d.value.im - o.im));
      REQUIRE(err <= 1e-26 * std::max(1.0, qabs(o)));
    }
  }
}

TEST_CASE("Euler-Maclaurin parameters do not move the value") {
  const ComplexQ a = zeta_euler_maclaurin(0.7, 200, 200, 20);
  const ComplexQ b = zeta_euler_maclaurin(0.7, 200, 400, 30);
  CHECK(fabs_q(a.re - b.re) < 1e-28Q);
  CHECK(fabs_q(a.im - b.im) < 1e-28Q);
  const auto& bf = bernoulli_over_factorial(3);
  CHECK(bf[0] == doctest::Approx(1.0 / 12));
  CHECK(static_cast<double>(bf[1]) == doctest::Approx(-1.0 / 720));
  CHECK(static_cast<double>(bf[2]) == doctest::Approx(1.0 / 30240));
}

TEST_CASE("conjugate symmetry") {
  for (double t : {3.0, 77.7, 1234.5}) {
    const auto p = zeta_reference(0.8, t, 20).value;
    const auto m = zeta_reference(0.8, -t, 20).value;
    REQUIRE(std::abs(p - std::conj(m)) < 1e-14 * std::abs(p));
    const auto c1 = zeta_corrected(0.8, t, 2 * t + 100).value;
    const auto c2 = zeta_corrected(0.8, -t, 2 * t + 100).value;
    REQUIRE(std::abs(c1 - std::conj(c2)) < 1e-12 * std::abs(c1));
  }
}

TEST_CASE("corrected sum converges at rate x^-alpha") {
  const double a = 0.75;
  const double t = 300;
  const auto ref = zeta_reference(a, t, 20).value;
  double prev = 1e9;
  for (double x : {200.0, 800.0, 3200.0, 12800.0}) {
    const ZetaSample z = zeta_corrected(a, t, x);
    const double err = std::abs(z.value - ref);
    REQUIRE(err <= z.est_error);
    REQUIRE(err < prev);
    prev = err;
    CHECK(z.est_error == doctest::Approx(std::pow(x, -a)));
  }
  // Without the correction the error does not decay.
  const auto bare = zeta_corrected(a, t, 12800).value - zeta_correction_term(a, t, 12800);
  CHECK(std::abs(bare - ref) > 10 * prev);
}

TEST_CASE("truncated sum on its window") {
  const double a = 0.75;
  const double T = 2000;
  for (double t : {std::pow(T, 0.25), 100.0, 999.0, T}) {
    const ZetaSample z = zeta_truncated(a, t, T);
    const auto ref = zeta_reference(a, t, 20).value;
    REQUIRE(std::abs(z.value - ref) <= z.est_error);
  }
  CHECK(in_truncated_window(a, std::pow(T, 0.25), T));
  CHECK_FALSE(in_truncated_window(a, 6.0, T));
  CHECK_THROWS_AS(zeta_truncated(a, 6.0, T), DomainError);
  CHECK_THROWS_AS(zeta_truncated(a, 2500, T), DomainError);
  CHECK_THROWS_AS(zeta_truncated(0.5, 100, T), InvalidArgument);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(zeta_corrected(0.75, 1000, 100), DomainError);
  CHECK_THROWS_AS(zeta_corrected(0.75, 10, 1), DomainError);
  CHECK_THROWS_AS(zeta_corrected(1.0, 10, 100), DomainError);
  CHECK_THROWS_AS(zeta_reference(1.0, 0, 20), DomainError);
  CHECK_THROWS_AS(zeta_reference(0.75, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(zeta_reference(0.75, 0, 31), ResourceRefusal);
  CHECK_THROWS_AS(zeta_reference(0.75, 2e7, 20), ResourceRefusal);
  CHECK_THROWS_AS(zeta_reference(-0.5, 1, 20), InvalidArgument);
  CHECK_THROWS_AS(parse_zeta_method("fast"), InvalidArgument);
  CHECK(parse_zeta_method("corrected") == ZetaMethod::corrected);
  CHECK(to_string(ZetaMethod::truncated) == "truncated");
}

TEST_CASE("batch modulus equals pointwise evaluation") {
  const double a = 0.6;
  const double T = 5000;
  std::vector<double> ts;
  for (int j = 0; j < 500; ++j) ts.push_back(100 + 0.37 * j);
  const auto m = batch_zeta_modulus(a, ts, T);
  REQUIRE(m.size() == ts.size());
  for (std::size_t j = 0; j < ts.size(); j += 13) {
    REQUIRE(m[j] == doctest::Approx(std::abs(zeta_truncated(a, ts[j], T).value)).epsilon(1e-11));
  }
  CHECK(batch_zeta_modulus(a, std::vector<double>{}, T).empty());
  std::vector<double> bad = ts;
  bad[3] += 0.1;
  CHECK_THROWS_AS(batch_zeta_modulus(a, bad, T), InvalidArgument);
  std::vector<double> outside{1.0, 2.0};
  CHECK_THROWS_AS(batch_zeta_modulus(a, outside, T), DomainError);
  CHECK(cached_zeta_series(a, 100) == cached_zeta_series(a, 100));
}
