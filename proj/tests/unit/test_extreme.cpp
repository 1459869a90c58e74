#include "doctest.h"

#include <cmath>

#include "zetares/error.hpp"
#include "zetares/extreme.hpp"
#include "zetares/zeta.hpp"

using namespace zr;

TEST_CASE("explicit bounds") {
  CHECK(theorem1_constant(0.75) == doctest::Approx(0.15136135474566861).epsilon(1e-15));
  CHECK(theorem1_bound(0.75, 1e4) == doctest::Approx(1.1560022311302147).epsilon(1e-15));
  CHECK(err_threshold(0.75, 1e6) == doctest::Approx(2.4226677348648287).epsilon(1e-15));
  CHECK(tau_limit(0.75) == doctest::Approx(std::pow(0.5, 0.25) / 6));
  const Theorem2Exponent e = theorem2_exponent(0.75, 0.05);
  CHECK(e.beta == doctest::Approx(0.0081).epsilon(1e-14));
  CHECK(e.floor_exponent == doctest::Approx(0.5 - 0.0081).epsilon(1e-14));
  CHECK(std::pow(1e4, e.floor_exponent) == doctest::Approx(92.81111710201684).epsilon(1e-13));
  CHECK(theorem2_exponent(0.6, 0.02).beta == doctest::Approx(0.004988306325798367).epsilon(1e-14));
  CHECK(level_threshold(0.7, 0.01, 1e5) ==
        doctest::Approx(std::exp(0.01 * std::pow(std::log(1e5), 0.3) / std::pow(std::log(std::log(1e5)), 0.7))));
  CHECK_THROWS_AS(theorem1_bound(0.75, 8), InvalidArgument);
  CHECK_THROWS_AS(theorem1_constant(0.5), InvalidArgument);
  CHECK_THROWS_AS(theorem2_exponent(0.75, tau_limit(0.75)), InvalidArgument);
  CHECK_THROWS_AS(theorem2_exponent(0.75, 0), InvalidArgument);
}

TEST_CASE("admissible tau keeps a positive floor exponent") {
  for (int i = 1; i < 20; ++i) {
    const double a = 0.5 + 0.5 * i / 20.0;
    for (int j = 1; j < 20; ++j) {
      const double tau = tau_limit(a) * j / 20.0;
      const Theorem2Exponent e = theorem2_exponent(a, tau);
      REQUIRE(e.beta > 0);
      REQUIRE(e.floor_exponent > 0);
      REQUIRE(e.floor_exponent <= 2 * a - 1);
      REQUIRE(e.floor_exponent == doctest::Approx(2 * a - 1 - e.beta));
    }
  }
}

TEST_CASE("search modulus switches formula at the window") {
  const double a = 0.75;
  const double T = 1e4;
  const double t_in = 500;
  const double want = std::abs(zeta_truncated(a, t_in, T).value + zeta_correction_term(a, t_in, T));
  CHECK(search_modulus(a, t_in, T) == doctest::Approx(want).epsilon(1e-14));
  const double t_low = 3;
  CHECK(search_modulus(a, t_low, T) == doctest::Approx(std::abs(zeta_corrected(a, t_low, 100).value)).epsilon(1e-14));
  CHECK(search_modulus(a, 0, T) == doctest::Approx(3.441285386945222894).epsilon(1e-2));
}

TEST_CASE("maximum search") {
  SearchOptions keep;
  keep.keep_grid = true;
  const SearchResult r = search_max(0.75, 1000, 0.05, 30, keep);
  CHECK(r.max_modulus >= 3.4412);
  CHECK(r.max_modulus >= r.coarse_max);
  CHECK(r.exceeded);
  CHECK(r.max_modulus == doctest::Approx(search_modulus(0.75, r.t_star, 1000)).epsilon(1e-15));
  REQUIRE(r.grid.size() == r.grid_points);
  for (std::size_t j = 0; j < r.grid.size(); j += 997) {
    REQUIRE(r.grid[j].modulus == doctest::Approx(search_modulus(0.75, r.grid[j].t, 1000)).epsilon(1e-10));
  }
  const SearchResult again = search_max(0.75, 1000, 0.05, 30);
  CHECK(again.max_modulus == r.max_modulus);
  CHECK(again.t_star == r.t_star);
  const SearchResult coarse = search_max(0.75, 1000, 0.05, 0);
  CHECK(coarse.max_modulus == coarse.coarse_max);
  CHECK(r.max_modulus >= coarse.max_modulus);
  CHECK_THROWS_AS(search_max(0.75, 1000, 0.2, 5), InvalidArgument);
  CHECK_THROWS_AS(search_max(0.75, 1e6, 0.05, 5), ResourceRefusal);
  CHECK_THROWS_AS(search_max(0.75, 1000, 0.05, -1), InvalidArgument);
}

TEST_CASE("measure estimate") {
  const double a = 0.75;
  const double tau = 0.05;
  const double T = 2000;
  const MeasureReport m1 = measure_estimate(a, tau, T, 4000, 11);
  const MeasureReport m2 = measure_estimate(a, tau, T, 4000, 11);
  CHECK(m1.estimated_measure == m2.estimated_measure);
  CHECK(m1.above == m2.above);
  CHECK(m1.threshold == doctest::Approx(level_threshold(a, tau, T)));
  CHECK(m1.theorem2_floor == doctest::Approx(std::pow(T, 0.5 - 0.0081)));
  CHECK(m1.estimated_measure >= 0);
  CHECK(m1.estimated_measure <= T);
  // Independent seeds and a larger sample agree within the reported errors.
  const MeasureReport big = measure_estimate(a, tau, T, 16000, 12);
  CHECK(std::fabs(big.estimated_measure - m1.estimated_measure) <=
        5 * (big.standard_error + m1.standard_error) + 1e-9 * T);
  CHECK(big.standard_error <= m1.standard_error * 1.0);
  MeasureOptions keep;
  keep.keep_samples = true;
  const MeasureReport s = measure_estimate(a, tau, T, 500, 3, keep);
  REQUIRE(s.per_sample.size() == 500);
  std::uint64_t above = 0;
  for (const auto& p : s.per_sample) {
    REQUIRE(p.t >= 0);
    REQUIRE(p.t <= T);
    REQUIRE(p.above == (p.modulus > s.threshold));
    above += p.above;
  }
  CHECK(above == s.above);
  CHECK_THROWS_AS(measure_estimate(a, tau, T, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(measure_estimate(a, 1.0, T, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(measure_estimate(a, tau, 1e7, 10, 1), ResourceRefusal);
}
