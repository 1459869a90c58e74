#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "zetares/error.hpp"
#include "zetares/primes.hpp"
#include "zetares/summation.hpp"

using namespace zr;

TEST_CASE("first primes agree with trial division") {
  const auto p = first_m_primes(1000);
  const auto q = oracle::first_primes(1000);
  CHECK(p == q);
  CHECK(p[99] == 541);
  CHECK_THROWS_AS(first_m_primes(0), InvalidArgument);
}

TEST_CASE("sieve counts") {
  const PrimeTable t = primes_up_to(100000);
  CHECK(t.primes.size() == 9592);
  CHECK(t.primes.size() == oracle::prime_count(100000));
  CHECK_THROWS_AS(primes_up_to(1), InvalidArgument);
  CHECK(primes_up_to(2).primes == std::vector<std::uint64_t>{2});
  const PrimeTable s = primes_up_to(10000);
  for (const auto x : s.primes) REQUIRE(oracle::is_prime(x));
}

TEST_CASE("prime upper bound") {
  const PrimeBound b6 = prime_upper_bound(6);
  CHECK(b6.value == doctest::Approx(14.2497453).epsilon(1e-8));
  CHECK(b6.in_validity_range);
  CHECK_FALSE(prime_upper_bound(5).in_validity_range);
  CHECK_THROWS_AS(prime_upper_bound(2), DomainError);
  const auto p = first_m_primes(20000);
  for (std::uint64_t r = 6; r <= p.size(); ++r) {
    REQUIRE(static_cast<double>(p[r - 1]) < prime_upper_bound(r).value);
  }
  // Below 6 the bound can fail; p_4 = 7 > 4(log 4 + log log 4).
  CHECK(7.0 > prime_upper_bound(4).value);
}

TEST_CASE("Stirling bounds bracket log n!") {
  for (std::uint64_t n = 1; n <= 300; ++n) {
    const StirlingBounds s = stirling_bounds(n);
    const double exact = static_cast<double>(oracle::log_factorial_exact(n));
    REQUIRE(s.log_lower <= exact + 1e-12 * exact);
    REQUIRE(exact <= s.log_upper + 1e-12 * exact);
    REQUIRE(s.log_lower < s.log_upper);
  }
  CHECK_THROWS_AS(stirling_bounds(0), InvalidArgument);
}

TEST_CASE("log binomials against exact integers") {
  const std::pair<std::uint64_t, std::uint64_t> cases[] = {
      {10, 3}, {64, 32}, {1000, 7}, {65536, 5}, {1u << 20, 3}, {1u << 24, 2}, {50, 0}, {50, 50}};
  for (const auto& [m, r] : cases) {
    const quad e = oracle::log_binomial_exact(m, r);
    CHECK(std::fabs(static_cast<double>(log_binomial_q(m, r) - e)) <= 1e-25 * std::max(1.0, static_cast<double>(e)));
    CHECK(log_binomial(m, r) == doctest::Approx(static_cast<double>(e)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_binomial(3, 4), InvalidArgument);
}

TEST_CASE("canonical primes and logs") {
  const auto p = oracle::first_primes(kMaxPrimes);
  for (int r = 0; r < kMaxPrimes; ++r) {
    REQUIRE(canonical_prime(r) == p[static_cast<std::size_t>(r)]);
    const quad l = canonical_prime_log(r);
    REQUIRE(std::fabs(static_cast<double>(exp_q(l) - static_cast<quad>(p[static_cast<std::size_t>(r)]))) < 1e-25 * p[r]);
  }
  CHECK_THROWS_AS(canonical_prime(kMaxPrimes), InvalidArgument);
}

TEST_CASE("pairwise sum is order-stable and compensated") {
  std::vector<double> v(100001, 0.1);
  v[0] = 1e16;
  const double s = pairwise_sum(v);
  CHECK(s == doctest::Approx(1e16 + 10000.0).epsilon(1e-15));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  NeumaierSum n;
  n += 1.0;
  n += 1e100;
  n += 1.0;
  n += -1e100;
  CHECK(n.value() == 2.0);
}
