#pragma once

// Prime generation and the explicit inequalities the resonator estimates
// rest on: p_r < r(log r + log log r) for r >= 6, Robbins' form of
// Stirling's formula, and log-binomials. All values are natural logs.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zetares/quad.hpp"

namespace zr {

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;  // every prime <= limit, ascending
};

PrimeTable primes_up_to(std::uint64_t limit);

// The m smallest primes.
std::vector<std::uint64_t> first_m_primes(std::size_t m);

struct PrimeBound {
  double value = 0.0;
  bool in_validity_range = false;  // r >= 6
};

// r (log r + log log r). Defined for r >= 3; flagged below 6.
PrimeBound prime_upper_bound(std::uint64_t r);

struct StirlingBounds {
  std::uint64_t n = 0;
  double log_lower = 0.0;  // log sqrt(2 pi) + (n+1/2) log n - n + 1/(12n+1)
  double log_upper = 0.0;  // same with 1/(12n)
};

StirlingBounds stirling_bounds(std::uint64_t n);

double log_binomial(std::uint64_t m, std::uint64_t r);
quad log_binomial_q(std::uint64_t m, std::uint64_t r);

// Canonical prime table used by exponent vectors: the first
// kMaxPrimes primes and their logs in extended precision.
inline constexpr int kMaxPrimes = 64;
std::uint64_t canonical_prime(int index);  // 0-based: canonical_prime(0) == 2
quad canonical_prime_log(int index);

}  // namespace zr
