#include "zetares/gcd_sums.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "zetares/error.hpp"
#include "zetares/kernels.hpp"
#include "zetares/primes.hpp"
#include "zetares/summation.hpp"

namespace zr {

namespace {

void require_positive_alpha(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw InvalidArgument("alpha must be a positive finite number, got " + fmt17(alpha));
  }
}

void require_index(const MultiplicativeSet& B, std::size_t k) {
  if (k >= B.N()) throw InvalidArgument("index k out of range (N = " + std::to_string(B.N()) + ")");
}

quad log_P(int M) {
  const quad m = M;
  const quad lm = log_q(m);
  return log_q(m * (lm + log_q(lm)));
}

}  // namespace

double gcd_sum_bruteforce(std::span<const u128> S, double alpha, const GcdSumOptions& options) {
  require_positive_alpha(alpha);
  if (S.size() > options.max_elements) {
    throw ResourceRefusal("gcd_sum_bruteforce: " + std::to_string(S.size()) + " elements exceed the cap " +
                          std::to_string(options.max_elements));
  }
  std::unordered_set<std::string> seen;
  for (const u128 v : S) {
    if (v == 0) throw InvalidArgument("gcd_sum_bruteforce: elements must be positive");
    if (!seen.insert(to_string_u128(v)).second) {
      throw InvalidArgument("gcd_sum_bruteforce: duplicate element " + to_string_u128(v));
    }
  }
  return parallel::gcd_double_sum(S, alpha);
}

double gcd_sum_bruteforce(const MultiplicativeSet& B, double alpha, const GcdSumOptions& options) {
  std::vector<u128> values;
  values.reserve(B.N());
  for (const auto& b : B.elements) {
    if (!b.has_exact) throw InvalidArgument("gcd_sum_bruteforce: set built in log-only mode");
    values.push_back(b.exact_value);
  }
  return gcd_sum_bruteforce(values, alpha, options);
}

quad log_gcd_sum_row_product(int M, double alpha) {
  if (M < 1 || M > kMaxPrimes) throw InvalidArgument("gcd_sum_row_product: M must be in [1, 64]");
  require_positive_alpha(alpha);
  quad s = 0;
  for (int r = 0; r < M; ++r) s += log1p_q(exp_q(-static_cast<quad>(alpha) * canonical_prime_log(r)));
  return s;
}

double gcd_sum_row_product(int M, double alpha) {
  return static_cast<double>(exp_q(log_gcd_sum_row_product(M, alpha)));
}

RestrictedSum gcd_sum_distance_restricted(const MultiplicativeSet& B, std::size_t k, int R, double alpha,
                                          const RestrictedOptions& options) {
  require_index(B, k);
  require_positive_alpha(alpha);
  if (R < 0 || R > B.M) throw InvalidArgument("gcd_sum_distance_restricted: R must be in [0, M]");
  const double count = std::exp(log_binomial(static_cast<std::uint64_t>(B.M), static_cast<std::uint64_t>(R)));
  if (count > static_cast<double>(options.max_terms) + 0.5) {
    throw ResourceRefusal("gcd_sum_distance_restricted: binom(M,R) = " + fmt17(count) + " exceeds the cap " +
                          std::to_string(options.max_terms));
  }
  RestrictedSum out;
  out.min_term = 1e300;
  NeumaierSum acc;
  const quad a = alpha;
  for_each_subset(B.M, R, [&](std::uint64_t diff) {
    const double term = static_cast<double>(exp_q(-a * exponent_log(diff)));
    acc += term;
    ++out.terms;
    out.min_term = std::min(out.min_term, term);
    out.max_term = std::max(out.max_term, term);
  });
  out.value = acc.value();
  return out;
}

RestrictedSum gcd_sum_distance_restricted_bruteforce(const MultiplicativeSet& B, std::size_t k, int R,
                                                     double alpha) {
  require_index(B, k);
  require_positive_alpha(alpha);
  const auto& bk = B.elements[k];
  if (!bk.has_exact) throw InvalidArgument("gcd_sum_distance_restricted_bruteforce: log-only set");
  RestrictedSum out;
  out.min_term = 1e300;
  NeumaierSum acc;
  const quad a = alpha;
  const quad log_bk = log_q(to_quad(bk.exact_value));
  for (const auto& bl : B.elements) {
    if (delta(bk.exponents, bl.exponents) != R) continue;
    const u128 g = gcd_u128(bk.exact_value, bl.exact_value);
    const quad e = 2 * log_q(to_quad(g)) - log_bk - log_q(to_quad(bl.exact_value));
    const double term = static_cast<double>(exp_q(a * e));
    acc += term;
    ++out.terms;
    out.min_term = std::min(out.min_term, term);
    out.max_term = std::max(out.max_term, term);
  }
  out.value = acc.value();
  return out;
}

TermFloorReport verify_restricted_term_bounds(const MultiplicativeSet& B, std::size_t k, int R) {
  require_index(B, k);
  if (B.M < 2) throw DomainError("verify_restricted_term_bounds: M must be >= 2 (log log M)");
  if (R < 1 || R > B.M) throw InvalidArgument("verify_restricted_term_bounds: R must be in [1, M]");
  TermFloorReport rep;
  rep.M = B.M;
  rep.R = R;
  const quad lp = log_P(B.M);
  rep.primes_below_bound = log_q(static_cast<quad>(B.primes.back())) <= lp;
  const quad floor_log = R * lp;
  const quad ceil_log = R * log_q(2.0Q);
  rep.min_log_margin = 1e300Q;
  for_each_subset(B.M, R, [&](std::uint64_t diff) {
    ++rep.terms;
    const quad lg = exponent_log(diff);
    rep.min_log_margin = std::min(rep.min_log_margin, floor_log - lg);
    if (lg > floor_log) ++rep.floor_violations;
    if (lg < ceil_log) ++rep.ceiling_violations;
  });
  return rep;
}

double lemma1_bound(int M, double alpha) {
  if (M < 3) throw DomainError("lemma1_bound: M must be >= 3, got " + std::to_string(M));
  require_positive_alpha(alpha);
  const quad m = M;
  const quad a = alpha;
  return static_cast<double>(pow_q(m, 1 - a) / (2.72Q * pow_q(log_q(m), a)));
}

ChainReport lemma1_chain_check(int M, double alpha, const ChainOptions& options) {
  const RChoice rc = choose_R(M, alpha);
  ChainReport rep;
  rep.M = M;
  rep.alpha = alpha;
  rep.R = rc.R;
  rep.effective_R = rc.effective_R;
  rep.R_clamped = rc.clamped;
  const int R = rc.effective_R;
  const quad m = M;
  const quad r = R;
  const quad a = alpha;
  const quad lm = log_q(m);
  const quad lr = log_q(r);
  const quad lp = log_P(M);
  const quad log3 = log_q(3.0Q);
  rep.log_prime_bound = lp;
  rep.binomial_term = log_binomial_q(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(R)) - a * r * lp;
  if (R < M) {
    const quad mr = m - r;
    rep.stirling_lower = (m + 0.5Q) * lm - log3 - (mr + 0.5Q) * log_q(mr) - (r + 0.5Q) * lr - a * r * lp;
  } else {
    rep.stirling_lower = -1e300Q;
  }
  rep.exp_form = -log3 - 0.5Q * lm + r * lm - r * lr - a * r * lp;
  rep.exponent_margin = r * lm - r * lr - a * r * lp - r;
  rep.final_bound = pow_q(m, 1 - a) / (2.72Q * pow_q(lm, a));
  rep.link_binomial_stirling = R < M && rep.binomial_term >= rep.stirling_lower;
  rep.link_stirling_exp = R < M && rep.stirling_lower >= rep.exp_form;
  rep.margin_nonnegative = rep.exponent_margin >= 0;
  rep.link_final = -log3 - 0.5Q * lm + r >= rep.final_bound;
  if (M <= options.brute_force_max_M) {
    const MultiplicativeSet B = build_B(M);
    const RestrictedSum s = gcd_sum_distance_restricted_bruteforce(B, 0, R, alpha);
    rep.lhs_restricted_sum = s.value;
    rep.lhs_above_binomial = log_q(static_cast<quad>(s.value)) >= rep.binomial_term;
  }
  return rep;
}

ChainScan lemma1_chain_scan(double alpha, std::span<const int> Ms, const ChainOptions& options) {
  ChainScan scan;
  scan.alpha = alpha;
  for (const int M : Ms) scan.points.push_back(lemma1_chain_check(M, alpha, options));
  // Smallest grid M from which the property holds at every later grid point.
  auto threshold = [&](auto pred) -> std::optional<int> {
    std::optional<int> t;
    for (auto it = scan.points.rbegin(); it != scan.points.rend(); ++it) {
      if (!pred(*it)) break;
      t = it->M;
    }
    return t;
  };
  scan.margin_threshold = threshold([](const ChainReport& c) { return !c.R_clamped && c.margin_nonnegative; });
  scan.all_links_threshold = threshold([](const ChainReport& c) { return !c.R_clamped && c.all_hold(); });
  return scan;
}

double gcd_sum_universal_ratio(double sum, double N, double alpha, double c) {
  if (!(N > std::exp(1.0))) throw DomainError("gcd_sum_universal_ratio: N must exceed e");
  const double ln = std::log(N);
  return sum / (N * std::exp(c * std::pow(ln, 1 - alpha) / std::pow(std::log(ln), alpha)));
}

}  // namespace zr
