#include "zetares/primes.hpp"

#include <array>
#include <cmath>
#include <string>

#include "zetares/error.hpp"

namespace zr {

PrimeTable primes_up_to(std::uint64_t limit) {
  if (limit < 2) {
    throw InvalidArgument("primes_up_to: limit must be >= 2, got " + std::to_string(limit));
  }
  // Odd-only sieve of Eratosthenes.
  const std::uint64_t half = (limit - 1) / 2;  // index i <-> 2i+3
  std::vector<bool> composite(half, false);
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t p = 2 * i + 3;
    if (p * p > limit) break;
    if (composite[i]) continue;
    for (std::uint64_t j = (p * p - 3) / 2; j < half; j += p) composite[j] = true;
  }
  PrimeTable table;
  table.limit = limit;
  table.primes.push_back(2);
  for (std::uint64_t i = 0; i < half; ++i) {
    if (!composite[i]) table.primes.push_back(2 * i + 3);
  }
  return table;
}

std::vector<std::uint64_t> first_m_primes(std::size_t m) {
  if (m == 0) throw InvalidArgument("first_m_primes: m must be >= 1");
  std::uint64_t limit = 15;
  if (m >= 6) {
    const double r = static_cast<double>(m);
    limit = static_cast<std::uint64_t>(std::ceil(r * (std::log(r) + std::log(std::log(r))))) + 1;
  }
  auto table = primes_up_to(limit);
  table.primes.resize(m);
  return table.primes;
}

PrimeBound prime_upper_bound(std::uint64_t r) {
  if (r < 3) {
    throw DomainError("prime_upper_bound: r must be >= 3 (log log r undefined or nonpositive), got " +
                      std::to_string(r));
  }
  const double x = static_cast<double>(r);
  return {x * (std::log(x) + std::log(std::log(x))), r >= 6};
}

StirlingBounds stirling_bounds(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("stirling_bounds: n must be >= 1");
  const quad x = static_cast<quad>(n);
  const quad pi = 3.14159265358979323846264338327950288Q;
  const quad base = 0.5Q * log_q(2 * pi) + (x + 0.5Q) * log_q(x) - x;
  StirlingBounds b;
  b.n = n;
  b.log_lower = static_cast<double>(base + 1 / (12 * x + 1));
  b.log_upper = static_cast<double>(base + 1 / (12 * x));
  return b;
}

quad log_binomial_q(std::uint64_t m, std::uint64_t r) {
  if (r > m) {
    throw InvalidArgument("log_binomial: r > m (" + std::to_string(r) + " > " + std::to_string(m) + ")");
  }
  const std::uint64_t s = r < m - r ? r : m - r;
  if (s == 0) return 0;
  const quad lm = lgamma_q(static_cast<quad>(m) + 1);
  const quad ls = lgamma_q(static_cast<quad>(s) + 1);
  const quad lt = lgamma_q(static_cast<quad>(m - s) + 1);
  return lm - ls - lt;
}

double log_binomial(std::uint64_t m, std::uint64_t r) {
  return static_cast<double>(log_binomial_q(m, r));
}

namespace {

struct CanonicalPrimes {
  std::array<std::uint64_t, kMaxPrimes> p{};
  std::array<quad, kMaxPrimes> log_p{};
  CanonicalPrimes() {
    const auto primes = first_m_primes(kMaxPrimes);
    for (int i = 0; i < kMaxPrimes; ++i) {
      p[i] = primes[i];
      log_p[i] = log_q(static_cast<quad>(primes[i]));
    }
  }
};

const CanonicalPrimes& canonical() {
  static const CanonicalPrimes table;
  return table;
}

void check_index(int index) {
  if (index < 0 || index >= kMaxPrimes) {
    throw InvalidArgument("canonical prime index out of range: " + std::to_string(index));
  }
}

}  // namespace

std::uint64_t canonical_prime(int index) {
  check_index(index);
  return canonical().p[index];
}

quad canonical_prime_log(int index) {
  check_index(index);
  return canonical().log_p[index];
}

}  // namespace zr
