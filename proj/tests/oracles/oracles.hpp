#pragma once

// Independent reference implementations for the tests. None of these call
// into the library's numeric code; they share only the scalar types.

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "zetares/quad.hpp"

namespace oracle {

using zr::quad;

bool is_prime(std::uint64_t n);           // trial division
std::vector<std::uint64_t> first_primes(std::size_t count);
std::uint64_t prime_count(std::uint64_t x);

// Adaptive Gauss-Kronrod 7/15 on [a, b] after splitting into `panels`
// equal pieces (use enough panels to resolve the oscillation).
long double gauss_kronrod(const std::function<long double(long double)>& f, long double a, long double b,
                          long double rel_tol, int panels);

struct ComplexQ {
  quad re = 0;
  quad im = 0;
};

// zeta(alpha + it) by Euler-Maclaurin in MPFR at `bits` of precision, with
// Bernoulli numbers from the binomial recurrence.
ComplexQ zeta_mpfr(double alpha, double t, int bits = 320);

// log binom(m, r) and log n! from exact GMP integers.
quad log_binomial_exact(std::uint64_t m, std::uint64_t r);
quad log_factorial_exact(std::uint64_t n);

struct ClassTotals {
  long double sum[3] = {0, 0, 0};
  std::uint64_t count[3] = {0, 0, 0};
};

// Brute-force classification of every (k, l, m, n) with m, n <= limit, the
// frequency |log(m d_k / (n d_l))| and the weighted cosine integral both in
// MPFR. d holds the exact representatives.
ClassTotals classify_decomposition(const std::vector<mpz_class>& d, std::uint64_t limit, double alpha, double T);

// int_{L}^{T} cos(a t) w(t) dt from antiderivatives in MPFR.
long double weighted_integral_mpfr(long double a, double alpha, double T);

// sum_{k,l} gcd(n_k,n_l)^{2a}/(n_k n_l)^a with std::gcd and long double.
long double gcd_sum_naive(const std::vector<std::uint64_t>& values, double alpha);

}  // namespace oracle
