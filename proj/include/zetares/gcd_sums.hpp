#pragma once

// Gal-type GCD sums sum_{k,l} gcd(n_k,n_l)^{2a} / (n_k n_l)^a, their product
// closed form over the multiplicative set, the distance-restricted sum and
// the numeric chain of inequalities that bounds it from below.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zetares/quad.hpp"
#include "zetares/resonator.hpp"

namespace zr {

struct GcdSumOptions {
  std::size_t max_elements = std::size_t{1} << 12;
};

// Brute-force double sum over all ordered pairs. Elements must be distinct.
double gcd_sum_bruteforce(std::span<const u128> S, double alpha, const GcdSumOptions& options = {});
double gcd_sum_bruteforce(const MultiplicativeSet& B, double alpha, const GcdSumOptions& options = {});

// prod_{r<=M} (1 + p_r^{-alpha}), the row sum for any fixed k.
double gcd_sum_row_product(int M, double alpha);
quad log_gcd_sum_row_product(int M, double alpha);

struct RestrictedOptions {
  std::uint64_t max_terms = std::uint64_t{1} << 26;
};

struct RestrictedSum {
  double value = 0;
  std::uint64_t terms = 0;
  double min_term = 0;   // smallest single term prod p^{-alpha}
  double max_term = 0;
};

// Sum over l with delta(b_k, b_l) = R, generated from the R-subsets of the
// prime positions (the symmetric difference).
RestrictedSum gcd_sum_distance_restricted(const MultiplicativeSet& B, std::size_t k, int R, double alpha,
                                          const RestrictedOptions& options = {});
// Same sum by scanning all N elements and computing each gcd exactly.
RestrictedSum gcd_sum_distance_restricted_bruteforce(const MultiplicativeSet& B, std::size_t k, int R,
                                                     double alpha);

// Checks every term with delta = R against the floor
// (M (log M + log log M))^{-alpha R} and the ceiling 2^{-alpha R}.
struct TermFloorReport {
  int M = 0;
  int R = 0;
  std::uint64_t terms = 0;
  bool primes_below_bound = false;      // p_M <= M (log M + log log M)
  std::uint64_t floor_violations = 0;   // prod p > P^R
  std::uint64_t ceiling_violations = 0; // prod p < 2^R
  quad min_log_margin = 0;              // min of R log P - log prod p
};

TermFloorReport verify_restricted_term_bounds(const MultiplicativeSet& B, std::size_t k, int R);

// M^{1-alpha} / (2.72 (log M)^alpha).
double lemma1_bound(int M, double alpha);

struct ChainReport {
  int M = 0;
  int R = 0;                 // formula value
  int effective_R = 1;       // used for the chain
  bool R_clamped = false;
  double alpha = 0;
  std::optional<double> lhs_restricted_sum;  // brute-forced for small M
  quad log_prime_bound = 0;                  // log(M (log M + log log M))
  quad binomial_term = 0;                    // log binom(M,R) - alpha R log P
  quad stirling_lower = 0;                   // log of the Stirling form
  quad exp_form = 0;                         // -log(3 sqrt M) + R log M - R log R - alpha R log P
  quad exponent_margin = 0;                  // R log M - R log R - alpha R log P - R
  quad final_bound = 0;                      // M^{1-alpha} / (2.72 (log M)^alpha)
  bool link_binomial_stirling = false;       // binomial_term >= stirling_lower
  bool link_stirling_exp = false;            // stirling_lower >= exp_form
  bool margin_nonnegative = false;
  bool link_final = false;                   // -log(3 sqrt M) + R >= final_bound
  std::optional<bool> lhs_above_binomial;    // restricted sum >= exp(binomial_term)

  bool stirling_links_hold() const { return link_binomial_stirling && link_stirling_exp; }
  bool all_hold() const { return stirling_links_hold() && margin_nonnegative && link_final; }
};

struct ChainOptions {
  int brute_force_max_M = 16;
};

ChainReport lemma1_chain_check(int M, double alpha, const ChainOptions& options = {});

struct ChainScan {
  double alpha = 0;
  std::vector<ChainReport> points;
  std::optional<int> margin_threshold;  // smallest M from which the margin stays >= 0 with R >= 1
  std::optional<int> all_links_threshold;
};

ChainScan lemma1_chain_scan(double alpha, std::span<const int> Ms, const ChainOptions& options = {});

// Reported, never asserted: S / (N exp(c (log N)^{1-a} / (log log N)^a)).
double gcd_sum_universal_ratio(double sum, double N, double alpha, double c);

}  // namespace zr
