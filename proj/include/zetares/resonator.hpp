#pragma once

// The multiplicative set B (all square-free products of the first M
// primes), the Hamming distance between exponent vectors, the geometric
// ratio buckets B_j = { b : (1+1/T)^{j-1} <= b < (1+1/T)^j } and the set D
// of bucket minima. Every ordering or equality decision is exact; logs are
// carried in binary128.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zetares/quad.hpp"

namespace zr {

// Exponent pattern (beta_1, ..., beta_M) in {0,1}^M. Bit r of the mask is
// beta_{r+1}, the exponent of the (r+1)-th prime.
class ExponentVector {
 public:
  ExponentVector() = default;
  ExponentVector(int length, std::uint64_t mask);

  // "1100" -> beta_1 = beta_2 = 1 (the integer 6).
  static ExponentVector parse(std::string_view bits);

  int length() const { return length_; }
  std::uint64_t mask() const { return mask_; }
  bool operator[](int r) const { return (mask_ >> r) & 1U; }
  int weight() const;
  std::string to_string() const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

 private:
  int length_ = 0;
  std::uint64_t mask_ = 0;
};

int delta(const ExponentVector& u, const ExponentVector& v);

// Calls f(mask) for every mask over M bits with exactly R bits set, in
// increasing order (Gosper's hack).
template <class F>
void for_each_subset(int M, int R, F&& f) {
  if (R < 0 || R > M) return;
  if (R == 0) {
    f(std::uint64_t{0});
    return;
  }
  std::uint64_t x = (std::uint64_t{1} << R) - 1;
  const std::uint64_t limit = M >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << M);
  while (true) {
    f(x);
    const std::uint64_t u = x & (~x + 1);
    const std::uint64_t v = x + u;
    if (v == 0) break;
    x = v + (((v ^ x) / u) >> 2);
    if (x >= limit) break;
  }
}
ExponentVector gcd_exponents(const ExponentVector& u, const ExponentVector& v);

// Natural log of prod p_r^{beta_r}, compensated binary128 accumulation.
quad exponent_log(std::uint64_t mask);
// prod p_r over the set bits; exact for masks over the first 26 primes.
u128 exponent_product(std::uint64_t mask);
mpz_class exponent_product_mpz(std::uint64_t mask);

struct ResonatorInteger {
  ExponentVector exponents;
  quad log_value = 0;
  u128 exact_value = 0;     // valid when has_exact
  bool has_exact = false;

  mpz_class exact() const;  // always available, computed from the exponents if needed
};

ResonatorInteger make_resonator_integer(const ExponentVector& exponents);

struct BuildOptions {
  int max_exact_M = 26;                    // u128 materialization limit
  std::size_t max_elements = std::size_t{1} << 24;
  bool log_only = false;                   // required above max_exact_M
};

struct MultiplicativeSet {
  int M = 0;
  std::vector<std::uint64_t> primes;
  std::vector<ResonatorInteger> elements;  // ascending, N = 2^M
  std::vector<std::uint32_t> index_of_mask;

  std::size_t N() const { return elements.size(); }
  const ResonatorInteger& by_mask(std::uint64_t mask) const { return elements[index_of_mask[mask]]; }
};

MultiplicativeSet build_B(int M, const BuildOptions& options = {});

// M = ceil((2 alpha - 1) log2 T).
int choose_M(double T, double alpha);

struct RChoice {
  int R = 0;              // the floor formula, may be 0
  int effective_R = 1;    // max(R, 1), used by downstream checks
  bool clamped = false;   // formula gave 0: outside the asymptotic regime
};

// R = floor(M^{1-alpha} / (e (log M + log log M)^alpha)).
RChoice choose_R(int M, double alpha);

using BucketIndex = u128;

// j with (1+1/T)^{j-1} <= b < (1+1/T)^j.
BucketIndex bucket_index(const ResonatorInteger& b, double T);
// Same, certified at arbitrary precision. Exposed for testing.
BucketIndex bucket_index_certified(const mpz_class& b, double T);

struct RepresentativeSet {
  int M = 0;
  double T = 0;
  std::vector<std::uint64_t> primes;
  std::vector<ResonatorInteger> elements;         // d_1 < ... < d_K
  std::vector<BucketIndex> buckets;               // bucket of d_k, strictly increasing
  std::vector<std::size_t> source_index;          // position of d_k in B
  std::vector<BucketIndex> element_bucket;        // bucket of every b in B (B order)
  std::vector<std::uint32_t> representative_of;   // k with b in the bucket of d_k
  std::size_t multi_element_buckets = 0;
  std::size_t largest_bucket = 1;

  std::size_t K() const { return elements.size(); }
  // Index k of the representative whose bucket holds b, if any.
  std::optional<std::size_t> find_representative(const ResonatorInteger& b) const;
};

RepresentativeSet build_D(const MultiplicativeSet& B, double T);

struct WindowReport {
  std::uint64_t checked = 0;
  std::vector<std::size_t> violations;  // positions in B
};

// 1 <= b/d < 1 + 1/T for every b and its representative d, decided exactly
// (T is a dyadic rational).
WindowReport verify_bucket_windows(const MultiplicativeSet& B, const RepresentativeSet& D);

struct SeparationViolation {
  std::size_t k = 0;   // positions in B, k < l
  std::size_t l = 0;
  std::string kind;    // "denominator-bound", "same-bucket", "ratio-below-sqrtT-window"
};

struct SeparationOptions {
  std::uint64_t max_pairs = std::uint64_t{1} << 28;
};

struct PairSeparationReport {
  int M = 0;
  int R = 0;
  double T = 0;
  std::uint64_t checked_pairs = 0;          // pairs with 1 <= delta <= 2R
  quad log_prime_bound = 0;                 // log(M(log M + log log M))
  quad log_denominator_bound = 0;           // 2R log(M(log M + log log M))
  bool chain_link_cube = false;             // (M(..))^{2R} <= e^{3R log M}
  bool chain_applies = false;               // (M(..))^{2R} <= sqrt(T)
  u128 max_denominator = 0;
  quad min_log_ratio = 0;                   // min log(b_l/b_k) over checked pairs
  std::vector<SeparationViolation> violations;  // sorted by (k, l)
};

PairSeparationReport verify_pair_separation(const MultiplicativeSet& B, int R, double T,
                                            const SeparationOptions& options = {});

struct RatioReport {
  std::uint64_t checked_pairs = 0;
  quad min_log_margin = 0;          // min over k < l of log(d_l/d_k) - (l-k-1) log(1+1/T)
  std::uint64_t certified_high_precision = 0;
};

// d_l / d_k >= (1+1/T)^{l-k-1} for all k < l. Throws InvariantViolation on
// any failure.
RatioReport verify_representative_ratios(const RepresentativeSet& D);

}  // namespace zr
