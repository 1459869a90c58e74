#include "zetares/resonator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mpfr.h>
#include <numeric>

#include "zetares/error.hpp"
#include "zetares/primes.hpp"

namespace zr {

namespace {

void require_same_length(const ExponentVector& u, const ExponentVector& v) {
  if (u.length() != v.length()) {
    throw InvalidArgument("exponent vectors differ in length (" + std::to_string(u.length()) + " vs " +
                          std::to_string(v.length()) + ")");
  }
}

void require_alpha(double alpha, const char* who) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw InvalidArgument(std::string(who) + ": alpha must lie in (1/2, 1), got " + fmt17(alpha));
  }
}

// T = mantissa * 2^exponent exactly.
struct Dyadic {
  mpz_class mantissa;
  long exponent = 0;
};

Dyadic dyadic(double T) {
  int e = 0;
  const double f = std::frexp(T, &e);
  Dyadic d;
  d.mantissa = mpz_class(static_cast<unsigned long>(std::ldexp(f, 53)));
  d.exponent = e - 53;
  return d;
}

// Exact sign of lhs * T - rhs for positive integers.
int compare_times_T(const mpz_class& lhs, double T, const mpz_class& rhs) {
  const Dyadic t = dyadic(T);
  mpz_class a = lhs * t.mantissa;
  mpz_class b = rhs;
  if (t.exponent >= 0) {
    a <<= static_cast<mp_bitcnt_t>(t.exponent);
  } else {
    b <<= static_cast<mp_bitcnt_t>(-t.exponent);
  }
  return cmp(a, b);
}

// Exact sign of num * T^n - den * (T+1)^n, i.e. of num/den - (1+1/T)^n.
int compare_ratio_power_exact(const mpz_class& num, const mpz_class& den, double T, unsigned long n) {
  const Dyadic t = dyadic(T);
  mpz_class lhs = num;
  mpz_class rhs = den;
  if (t.exponent >= 0) {
    mpz_class Ti = t.mantissa << static_cast<mp_bitcnt_t>(t.exponent);
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), Ti.get_mpz_t(), n);
    mpz_class Ti1 = Ti + 1;
    mpz_pow_ui(b.get_mpz_t(), Ti1.get_mpz_t(), n);
    lhs *= a;
    rhs *= b;
  } else {
    // T = m / 2^q, (1+1/T) = (m + 2^q) / m.
    mpz_class m = t.mantissa;
    mpz_class mq = m + (mpz_class(1) << static_cast<mp_bitcnt_t>(-t.exponent));
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), m.get_mpz_t(), n);
    mpz_pow_ui(b.get_mpz_t(), mq.get_mpz_t(), n);
    lhs *= a;
    rhs *= b;
  }
  return cmp(lhs, rhs);
}

class MpfrScope {
 public:
  MpfrScope(std::initializer_list<mpfr_ptr> vars, mpfr_prec_t prec) : vars_(vars) {
    for (auto v : vars_) mpfr_init2(v, prec);
  }
  ~MpfrScope() {
    for (auto v : vars_) mpfr_clear(v);
  }

 private:
  std::vector<mpfr_ptr> vars_;
};

// Lower and upper bounds on log(1 + 1/T).
void log1p_inv_bounds(mpfr_t lo, mpfr_t hi, double T) {
  mpfr_set_d(lo, T, MPFR_RNDN);  // exact
  mpfr_set_d(hi, T, MPFR_RNDN);
  mpfr_ui_div(hi, 1, hi, MPFR_RNDU);
  mpfr_ui_div(lo, 1, lo, MPFR_RNDD);
  mpfr_log1p(hi, hi, MPFR_RNDU);
  mpfr_log1p(lo, lo, MPFR_RNDD);
}

// Sign of log(num/den) - n log(1+1/T) at the given precision; 0 if the
// enclosure straddles zero.
int compare_ratio_power_mpfr(const mpz_class& num, const mpz_class& den, double T, unsigned long n,
                             mpfr_prec_t prec) {
  mpfr_t a_lo, a_hi, tmp, l_lo, l_hi;
  MpfrScope scope({a_lo, a_hi, tmp, l_lo, l_hi}, prec);
  mpfr_set_z(a_lo, num.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(tmp, den.get_mpz_t(), MPFR_RNDU);
  mpfr_div(a_lo, a_lo, tmp, MPFR_RNDD);
  mpfr_log(a_lo, a_lo, MPFR_RNDD);
  mpfr_set_z(a_hi, num.get_mpz_t(), MPFR_RNDU);
  mpfr_set_z(tmp, den.get_mpz_t(), MPFR_RNDD);
  mpfr_div(a_hi, a_hi, tmp, MPFR_RNDU);
  mpfr_log(a_hi, a_hi, MPFR_RNDU);
  log1p_inv_bounds(l_lo, l_hi, T);
  mpfr_mul_ui(l_lo, l_lo, n, MPFR_RNDD);
  mpfr_mul_ui(l_hi, l_hi, n, MPFR_RNDU);
  if (mpfr_cmp(a_lo, l_hi) > 0) return 1;
  if (mpfr_cmp(a_hi, l_lo) < 0) return -1;
  return 0;
}

constexpr quad kTwoPow100 = 1.2676506002282294014967032053760e30Q;

}  // namespace

ExponentVector::ExponentVector(int length, std::uint64_t mask) : length_(length), mask_(mask) {
  if (length < 1 || length > kMaxPrimes) {
    throw InvalidArgument("exponent vector length must be in [1, 64], got " + std::to_string(length));
  }
  if (length < 64 && (mask >> length) != 0) {
    throw InvalidArgument("exponent mask has bits beyond length " + std::to_string(length));
  }
}

ExponentVector ExponentVector::parse(std::string_view bits) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      mask |= std::uint64_t{1} << i;
    } else if (bits[i] != '0') {
      throw InvalidArgument("exponent string must consist of 0/1, got '" + std::string(bits) + "'");
    }
  }
  return ExponentVector(static_cast<int>(bits.size()), mask);
}

int ExponentVector::weight() const { return std::popcount(mask_); }

std::string ExponentVector::to_string() const {
  std::string s(static_cast<std::size_t>(length_), '0');
  for (int r = 0; r < length_; ++r) {
    if ((*this)[r]) s[static_cast<std::size_t>(r)] = '1';
  }
  return s;
}

int delta(const ExponentVector& u, const ExponentVector& v) {
  require_same_length(u, v);
  return std::popcount(u.mask() ^ v.mask());
}

ExponentVector gcd_exponents(const ExponentVector& u, const ExponentVector& v) {
  require_same_length(u, v);
  return ExponentVector(u.length(), u.mask() & v.mask());
}

quad exponent_log(std::uint64_t mask) {
  quad sum = 0;
  quad comp = 0;
  while (mask != 0) {
    const int r = std::countr_zero(mask);
    mask &= mask - 1;
    const quad y = canonical_prime_log(r) - comp;
    const quad t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

u128 exponent_product(std::uint64_t mask) {
  u128 v = 1;
  const u128 max = ~static_cast<u128>(0);
  while (mask != 0) {
    const int r = std::countr_zero(mask);
    mask &= mask - 1;
    const std::uint64_t p = canonical_prime(r);
    if (v > max / p) throw InvalidArgument("exponent product exceeds 128 bits");
    v *= p;
  }
  return v;
}

mpz_class exponent_product_mpz(std::uint64_t mask) {
  mpz_class v = 1;
  while (mask != 0) {
    const int r = std::countr_zero(mask);
    mask &= mask - 1;
    v *= static_cast<unsigned long>(canonical_prime(r));
  }
  return v;
}

mpz_class ResonatorInteger::exact() const {
  if (has_exact) return to_mpz(exact_value);
  return exponent_product_mpz(exponents.mask());
}

ResonatorInteger make_resonator_integer(const ExponentVector& exponents) {
  ResonatorInteger b;
  b.exponents = exponents;
  b.log_value = exponent_log(exponents.mask());
  // The first 26 primes multiply to < 2^121; wider masks may still fit.
  const int top = exponents.mask() == 0 ? 0 : 64 - std::countl_zero(exponents.mask());
  if (top <= 26) {
    b.exact_value = exponent_product(exponents.mask());
    b.has_exact = true;
  } else {
    const mpz_class v = exponent_product_mpz(exponents.mask());
    if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 128) {
      b.exact_value = to_u128(v);
      b.has_exact = true;
    }
  }
  return b;
}

MultiplicativeSet build_B(int M, const BuildOptions& options) {
  if (M < 1) throw InvalidArgument("build_B: M must be >= 1, got " + std::to_string(M));
  if (M > options.max_exact_M && !options.log_only) {
    throw ResourceRefusal("build_B: M = " + std::to_string(M) + " exceeds the exact-materialization cap " +
                          std::to_string(options.max_exact_M) + " (use log-only mode)");
  }
  if (M >= 63 || (std::size_t{1} << M) > options.max_elements) {
    throw ResourceRefusal("build_B: 2^" + std::to_string(M) + " elements exceed the element cap " +
                          std::to_string(options.max_elements));
  }
  MultiplicativeSet B;
  B.M = M;
  B.primes = first_m_primes(static_cast<std::size_t>(M));
  const std::uint64_t N = std::uint64_t{1} << M;
  B.elements.resize(N);
#pragma omp parallel for schedule(static)
  for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(N); ++mask) {
    const ExponentVector ev(M, static_cast<std::uint64_t>(mask));
    if (options.log_only) {
      ResonatorInteger b;
      b.exponents = ev;
      b.log_value = exponent_log(ev.mask());
      B.elements[static_cast<std::size_t>(mask)] = b;
    } else {
      B.elements[static_cast<std::size_t>(mask)] = make_resonator_integer(ev);
    }
  }
  if (options.log_only) {
    std::sort(B.elements.begin(), B.elements.end(),
              [](const ResonatorInteger& a, const ResonatorInteger& b) { return a.log_value < b.log_value; });
  } else {
    std::sort(B.elements.begin(), B.elements.end(),
              [](const ResonatorInteger& a, const ResonatorInteger& b) { return a.exact_value < b.exact_value; });
  }
  B.index_of_mask.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    B.index_of_mask[B.elements[i].exponents.mask()] = static_cast<std::uint32_t>(i);
  }
  return B;
}

int choose_M(double T, double alpha) {
  require_alpha(alpha, "choose_M");
  if (!(T >= 16)) throw InvalidArgument("choose_M: T must be >= 16, got " + fmt17(T));
  double v = (2 * alpha - 1) * std::log2(T);
  const double r = std::nearbyint(v);
  if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) v = r;
  return std::max(1, static_cast<int>(std::ceil(v)));
}

RChoice choose_R(int M, double alpha) {
  if (M < 3) throw DomainError("choose_R: M must be >= 3 (log log M), got " + std::to_string(M));
  require_alpha(alpha, "choose_R");
  const quad m = M;
  const quad a = alpha;
  const quad e = 2.71828182845904523536028747135266250Q;
  const quad lm = log_q(m);
  const quad value = pow_q(m, 1 - a) / (e * pow_q(lm + log_q(lm), a));
  RChoice c;
  c.R = static_cast<int>(floor_q(value));
  c.clamped = c.R == 0;
  c.effective_R = std::max(c.R, 1);
  return c;
}

BucketIndex bucket_index_certified(const mpz_class& b, double T) {
  if (b < 1) throw InvalidArgument("bucket_index: b must be >= 1");
  if (!(T >= 2)) throw InvalidArgument("bucket_index: T must be >= 2, got " + fmt17(T));
  if (b == 1) return 1;
  for (mpfr_prec_t prec = 256; prec <= 65536; prec *= 4) {
    mpfr_t lb_lo, lb_hi, l_lo, l_hi;
    MpfrScope scope({lb_lo, lb_hi, l_lo, l_hi}, prec);
    mpfr_set_z(lb_lo, b.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(lb_hi, b.get_mpz_t(), MPFR_RNDU);
    mpfr_log(lb_lo, lb_lo, MPFR_RNDD);
    mpfr_log(lb_hi, lb_hi, MPFR_RNDU);
    log1p_inv_bounds(l_lo, l_hi, T);
    mpfr_div(lb_lo, lb_lo, l_hi, MPFR_RNDD);
    mpfr_div(lb_hi, lb_hi, l_lo, MPFR_RNDU);
    mpfr_floor(lb_lo, lb_lo);
    mpfr_floor(lb_hi, lb_hi);
    if (mpfr_equal_p(lb_lo, lb_hi)) {
      mpz_class j;
      mpfr_get_z(j.get_mpz_t(), lb_lo, MPFR_RNDN);
      return to_u128(j) + 1;
    }
  }
  throw InvariantViolation("bucket_index: boundary not resolved at 65536 bits");
}

BucketIndex bucket_index(const ResonatorInteger& b, double T) {
  if (!(T >= 2)) throw InvalidArgument("bucket_index: T must be >= 2, got " + fmt17(T));
  if (b.exponents.mask() == 0 || b.log_value == 0) return 1;
  const quad step = log1p_q(1 / static_cast<quad>(T));
  const quad y = b.log_value / step;
  if (!(y < 1e33Q)) throw ResourceRefusal("bucket_index: bucket index exceeds binary128 integer range");
  const quad j0 = floor_q(y);
  const quad frac = y - j0;
  const quad tol = y / kTwoPow100 + 1 / kTwoPow100;
  if (frac < tol || 1 - frac < tol) return bucket_index_certified(b.exact(), T);
  return static_cast<u128>(j0) + 1;
}

std::optional<std::size_t> RepresentativeSet::find_representative(const ResonatorInteger& b) const {
  const BucketIndex j = bucket_index(b, T);
  const auto it = std::lower_bound(buckets.begin(), buckets.end(), j);
  if (it == buckets.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - buckets.begin());
}

RepresentativeSet build_D(const MultiplicativeSet& B, double T) {
  if (!(T >= 2)) throw InvalidArgument("build_D: T must be >= 2, got " + fmt17(T));
  RepresentativeSet D;
  D.M = B.M;
  D.T = T;
  D.primes = B.primes;
  const std::size_t N = B.N();
  D.element_bucket.resize(N);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(N); ++i) {
    D.element_bucket[static_cast<std::size_t>(i)] = bucket_index(B.elements[static_cast<std::size_t>(i)], T);
  }
  D.representative_of.resize(N);
  std::size_t run = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0 && D.element_bucket[i] < D.element_bucket[i - 1]) {
      throw InvariantViolation("build_D: bucket indices not monotone in b");
    }
    if (i == 0 || D.element_bucket[i] != D.element_bucket[i - 1]) {
      if (run > 1) ++D.multi_element_buckets;
      run = 0;
      D.elements.push_back(B.elements[i]);
      D.buckets.push_back(D.element_bucket[i]);
      D.source_index.push_back(i);
    }
    ++run;
    D.largest_bucket = std::max(D.largest_bucket, run);
    D.representative_of[i] = static_cast<std::uint32_t>(D.elements.size() - 1);
  }
  if (run > 1) ++D.multi_element_buckets;
  return D;
}

WindowReport verify_bucket_windows(const MultiplicativeSet& B, const RepresentativeSet& D) {
  WindowReport report;
  for (std::size_t i = 0; i < B.N(); ++i) {
    const mpz_class b = B.elements[i].exact();
    const mpz_class d = D.elements[D.representative_of[i]].exact();
    ++report.checked;
    // 1 <= b/d and T (b - d) < d.
    if (b < d || compare_times_T(b - d, D.T, d) >= 0) report.violations.push_back(i);
  }
  return report;
}

PairSeparationReport verify_pair_separation(const MultiplicativeSet& B, int R, double T,
                                            const SeparationOptions& options) {
  if (R < 1) throw InvalidArgument("verify_pair_separation: R must be >= 1");
  if (!(T >= 2)) throw InvalidArgument("verify_pair_separation: T must be >= 2");
  if (B.M < 2) throw DomainError("verify_pair_separation: M must be >= 2 (log log M)");
  const std::uint64_t N = B.N();
  if (N * (N - 1) / 2 > options.max_pairs) {
    throw ResourceRefusal("verify_pair_separation: " + std::to_string(N * (N - 1) / 2) +
                          " pairs exceed the cap " + std::to_string(options.max_pairs));
  }
  PairSeparationReport rep;
  rep.M = B.M;
  rep.R = R;
  rep.T = T;
  const quad m = B.M;
  const quad lm = log_q(m);
  rep.log_prime_bound = log_q(m * (lm + log_q(lm)));
  rep.log_denominator_bound = 2 * R * rep.log_prime_bound;
  rep.chain_link_cube = rep.log_denominator_bound <= 3 * R * lm;
  rep.chain_applies = rep.log_denominator_bound <= 0.5Q * log_q(static_cast<quad>(T));

  std::vector<BucketIndex> bucket(N);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(N); ++i) {
    bucket[static_cast<std::size_t>(i)] = bucket_index(B.elements[static_cast<std::size_t>(i)], T);
  }

  const quad qT = T;
  const quad slack = 1e-28Q;
  std::uint64_t checked = 0;
  u128 max_den = 0;
  quad min_log = 1e300Q;
  std::vector<SeparationViolation> violations;
#pragma omp parallel
  {
    std::uint64_t local_checked = 0;
    u128 local_max_den = 0;
    quad local_min = 1e300Q;
    std::vector<SeparationViolation> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t ks = 0; ks < static_cast<std::int64_t>(N); ++ks) {
      const auto k = static_cast<std::size_t>(ks);
      const auto& bk = B.elements[k];
      for (std::size_t l = k + 1; l < N; ++l) {
        const auto& bl = B.elements[l];
        const int d = std::popcount(bk.exponents.mask() ^ bl.exponents.mask());
        if (d < 1 || d > 2 * R) continue;
        ++local_checked;
        // b_l > b_k; reduced denominator is b_k / gcd.
        const std::uint64_t den_mask = bk.exponents.mask() & ~bl.exponents.mask();
        const quad log_den = exponent_log(den_mask);
        const quad log_ratio = bl.log_value - bk.log_value;
        local_min = std::min(local_min, log_ratio);
        if (log_den > rep.log_denominator_bound + slack) {
          local.push_back({k, l, "denominator-bound"});
        }
        if (bucket[k] == bucket[l]) local.push_back({k, l, "same-bucket"});
        if (bk.has_exact && bl.has_exact) {
          const u128 den = exponent_product(den_mask);
          local_max_den = std::max(local_max_den, den);
          if (rep.chain_applies) {
            // b_l/b_k >= 1 + 1/sqrt(T)  <=>  T (num - den)^2 >= den^2.
            const u128 num = exponent_product(bl.exponents.mask() & ~bk.exponents.mask());
            const quad diff = to_quad(num - den);
            const quad qd = to_quad(den);
            if (qT * diff * diff < qd * qd) local.push_back({k, l, "ratio-below-sqrtT-window"});
          }
        }
      }
    }
#pragma omp critical(zr_pair_separation)
    {
      checked += local_checked;
      max_den = std::max(max_den, local_max_den);
      min_log = std::min(min_log, local_min);
      violations.insert(violations.end(), local.begin(), local.end());
    }
  }
  std::sort(violations.begin(), violations.end(), [](const auto& a, const auto& b) {
    return a.k != b.k ? a.k < b.k : (a.l != b.l ? a.l < b.l : a.kind < b.kind);
  });
  rep.checked_pairs = checked;
  rep.max_denominator = max_den;
  rep.min_log_ratio = checked > 0 ? min_log : 0;
  rep.violations = std::move(violations);
  return rep;
}

RatioReport verify_representative_ratios(const RepresentativeSet& D) {
  RatioReport rep;
  const std::size_t K = D.K();
  if (K < 2) return rep;
  const quad step = log1p_q(1 / static_cast<quad>(D.T));
  quad min_margin = 1e300Q;
  std::uint64_t certified = 0;
  bool violated = false;
  std::size_t bad_k = 0, bad_l = 0;
#pragma omp parallel
  {
    quad local_min = 1e300Q;
    std::uint64_t local_cert = 0;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t ks = 0; ks < static_cast<std::int64_t>(K); ++ks) {
      const auto k = static_cast<std::size_t>(ks);
      for (std::size_t l = k + 1; l < K; ++l) {
        const quad lhs = D.elements[l].log_value - D.elements[k].log_value;
        const quad rhs = static_cast<quad>(l - k - 1) * step;
        const quad margin = lhs - rhs;
        local_min = std::min(local_min, margin);
        const quad tol = 1e-28Q * (lhs + rhs + 1);
        if (margin > tol) continue;
        ++local_cert;
        const mpz_class num = D.elements[l].exact();
        const mpz_class den = D.elements[k].exact();
        int s = compare_ratio_power_mpfr(num, den, D.T, l - k - 1, 512);
        if (s == 0) s = compare_ratio_power_exact(num, den, D.T, l - k - 1);
        if (s < 0) {
#pragma omp critical(zr_ratio_violation)
          {
            violated = true;
            bad_k = k;
            bad_l = l;
          }
        }
      }
    }
#pragma omp critical(zr_ratio_merge)
    {
      min_margin = std::min(min_margin, local_min);
      certified += local_cert;
    }
  }
  if (violated) {
    throw InvariantViolation("representative ratio bound violated for d_" + std::to_string(bad_k + 1) +
                             ", d_" + std::to_string(bad_l + 1));
  }
  rep.checked_pairs = static_cast<std::uint64_t>(K) * (K - 1) / 2;
  rep.min_log_margin = min_margin;
  rep.certified_high_precision = certified;
  return rep;
}

}  // namespace zr
