#include "zetares/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "zetares/error.hpp"
#include "zetares/gcd_sums.hpp"
#include "zetares/kernels.hpp"
#include "zetares/phase.hpp"
#include "zetares/primes.hpp"
#include "zetares/summation.hpp"

namespace zr {

namespace {

// sin(a*X) with the product formed exactly before reduction.
double sin_prod(double a, double X) { return std::sin(reduce_phase(a, DD{X, 0.0})); }

// sin(aX)/(aX).
double sinc_prod(double a, double X) {
  const double y = a * X;
  if (std::fabs(y) < 1e-4) {
    const double y2 = y * y;
    return 1 - y2 / 6 * (1 - y2 / 20);
  }
  return sin_prod(a, X) / y;
}

void require_T(double T) {
  if (!(T > 0) || !std::isfinite(T)) throw InvalidArgument("T must be positive and finite, got " + fmt17(T));
}

std::vector<quad> element_logs(const RepresentativeSet& D) {
  std::vector<quad> logs;
  logs.reserve(D.K());
  for (const auto& d : D.elements) logs.push_back(d.log_value);
  return logs;
}

}  // namespace

WeightedKernel make_kernel(double T, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (1/2, 1), got " + fmt17(alpha));
  require_T(T);
  WeightedKernel k;
  k.T = T;
  k.alpha = alpha;
  k.lower = std::pow(T, 1 - alpha);
  k.breakpoint = 2 * k.lower;
  k.upper = T;
  if (!(k.breakpoint <= T)) {
    throw DomainError("weight kernel needs 2 T^(1-alpha) <= T; got 2 T^(1-alpha) = " + fmt17(k.breakpoint) +
                      " > T = " + fmt17(T));
  }
  return k;
}

std::string to_string(FrequencyClass c) {
  switch (c) {
    case FrequencyClass::Type1:
      return "type1";
    case FrequencyClass::Type2:
      return "type2";
    case FrequencyClass::Type3:
      return "type3";
  }
  return "?";
}

FrequencyThresholds frequency_thresholds(double T, double alpha) {
  require_T(T);
  FrequencyThresholds th;
  const quad qT = T;
  th.type1 = 1 / qT;
  th.type2 = 1 / (2 * pow_q(qT, 1 - static_cast<quad>(alpha)));
  return th;
}

FrequencyClass classify_frequency(quad a, const FrequencyThresholds& th) {
  if (a < 0) throw InvalidArgument("classify_frequency: a must be >= 0");
  if (a <= th.type1) return FrequencyClass::Type1;
  if (a <= th.type2) return FrequencyClass::Type2;
  return FrequencyClass::Type3;
}

FrequencyClass classify_frequency(double a, double T, double alpha) {
  if (!(a >= 0)) throw InvalidArgument("classify_frequency: a must be >= 0, got " + fmt17(a));
  require_T(T);
  // Boundaries as the caller writes them in double: a = 1/T is type 1.
  if (a <= 1.0 / T) return FrequencyClass::Type1;
  if (a <= 1.0 / (2 * std::pow(T, 1 - alpha))) return FrequencyClass::Type2;
  return FrequencyClass::Type3;
}

std::complex<double> resonator_eval(const RepresentativeSet& D, double t) {
  const auto logs = element_logs(D);
  return std::conj(serial::dirichlet_point(unit_series(logs), t));
}

std::vector<std::complex<double>> resonator_grid(const RepresentativeSet& D, double t0, double h,
                                                 std::size_t count) {
  const auto logs = element_logs(D);
  auto out = parallel::dirichlet_grid(unit_series(logs), t0, h, count);
  for (auto& z : out) z = std::conj(z);
  return out;
}

std::complex<double> euler_product_eval(int M, double t) {
  if (M < 1 || M > kMaxPrimes) throw InvalidArgument("euler_product_eval: M must be in [1, 64]");
  std::complex<double> z = 1;
  for (int r = 0; r < M; ++r) z *= 1.0 + std::conj(phasor(t, to_dd(canonical_prime_log(r))));
  return z;
}

double weight(double t, const WeightedKernel& kernel) {
  if (!(t >= kernel.lower && t <= kernel.upper)) {
    throw DomainError("weight: t = " + fmt17(t) + " outside the support [" + fmt17(kernel.lower) + ", " +
                      fmt17(kernel.upper) + "]");
  }
  return t <= kernel.breakpoint ? 3 - t / kernel.T : 1 - t / kernel.T;
}

double triangle_cos_integral(double a, double T) {
  require_T(T);
  a = std::fabs(a);
  if (a == 0) return T / 2;
  const double s = sinc_prod(a, T / 2);
  return T / 2 * s * s;
}

double weighted_cos_integral(double a, const WeightedKernel& kernel) {
  const double T = kernel.T;
  const double L = kernel.lower;
  a = std::fabs(a);
  if (a == 0) return T / 2 + L + L * L / (2 * T);
  // int_0^X cos(at)(1 - t/T) dt = X (1 - X/T) sinc(aX) + X^2/(2T) sinc^2(aX/2)
  const double sT = sinc_prod(a, T / 2);
  const double sL = sinc_prod(a, L);
  const double sL2 = sinc_prod(a, L / 2);
  const double s2L = sinc_prod(a, 2 * L);
  const double tri = T / 2 * sT * sT - L * (1 - L / T) * sL - L * L / (2 * T) * sL2 * sL2;
  const double box = 2 * (2 * L * s2L - L * sL);
  return tri + box;
}

double resonator_square_integral(const RepresentativeSet& D, double T) {
  return square_integral_report(D, T).closed_form;
}

SquareIntegralReport square_integral_report(const RepresentativeSet& D, double T,
                                            const SquareIntegralOptions& options) {
  require_T(T);
  const std::size_t K = D.K();
  if (K == 0) throw InvalidArgument("square integral: empty representative set");
  const std::uint64_t pairs = static_cast<std::uint64_t>(K) * (K - 1) / 2;
  if (pairs > options.max_pairs) {
    throw ResourceRefusal("square integral: " + std::to_string(pairs) + " pairs exceed the cap " +
                          std::to_string(options.max_pairs));
  }
  std::vector<double> rows(K, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ks = 0; ks < static_cast<std::int64_t>(K); ++ks) {
    const auto k = static_cast<std::size_t>(ks);
    NeumaierSum row;
    for (std::size_t l = k + 1; l < K; ++l) {
      const quad lam = D.elements[l].log_value - D.elements[k].log_value;
      row += std::sin(reduce_phase(T, to_dd(lam))) / static_cast<double>(lam);
    }
    rows[k] = row.value();
  }
  SquareIntegralReport rep;
  rep.K = K;
  rep.T = T;
  const double dK = static_cast<double>(K);
  rep.closed_form = dK * T + 2 * pairwise_sum(rows);
  rep.triangle_bound = dK * dK * T;
  rep.l2_bound = 11 * dK * T * (1 + std::log(dK));
  rep.l2_bound_ratio = rep.closed_form / rep.l2_bound;
  if (options.with_quadrature) {
    const double a_max = std::max(1.0, static_cast<double>(D.elements.back().log_value - D.elements.front().log_value));
    QuadratureOptions q;
    q.max_step = std::numbers::pi / (8 * a_max);
    q.rtol = options.rtol;
    GridFunction f = [&D](double t0, double h, std::size_t count) {
      const auto A = resonator_grid(D, t0, h, count);
      std::vector<double> v(count);
      for (std::size_t j = 0; j < count; ++j) v[j] = std::norm(A[j]);
      return v;
    };
    rep.quadrature = simpson_adaptive(f, 0.0, T, q);
  }
  return rep;
}

ResonanceDecomposition frequency_decomposition(const RepresentativeSet& D, double alpha, double T,
                                               std::uint64_t mn_limit, const DecompositionOptions& options) {
  make_kernel(T, alpha);
  if (mn_limit < 1) throw InvalidArgument("frequency_decomposition: mn_limit must be >= 1");
  const double K = static_cast<double>(D.K());
  const double ops = K * K * static_cast<double>(mn_limit) * static_cast<double>(mn_limit);
  if (ops > options.max_operations) {
    throw ResourceRefusal("frequency_decomposition: K^2 mn_limit^2 = " + fmt17(ops) +
                          " exceeds the operation cap " + fmt17(options.max_operations));
  }
  DecompositionProblem p;
  p.mn_limit = mn_limit;
  p.alpha = alpha;
  p.T = T;
  for (const auto& d : D.elements) {
    if (!d.has_exact) throw InvalidArgument("frequency_decomposition: representatives must have exact values");
    p.masks.push_back(d.exponents.mask());
  }
  const auto parts = parallel::decomposition(p);
  const ClassSums merged = detail::merge(parts);
  std::vector<double> pair_totals(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    pair_totals[i] = parts[i].sum[0] + parts[i].sum[1] + parts[i].sum[2];
  }
  ResonanceDecomposition out;
  out.alpha = alpha;
  out.T = T;
  out.K = D.K();
  out.mn_limit = mn_limit;
  out.type1_sum = merged.sum[0];
  out.type2_sum = merged.sum[1];
  out.type3_sum = merged.sum[2];
  for (int c = 0; c < 3; ++c) out.count[c] = merged.count[c];
  out.total = pairwise_sum(pair_totals);
  return out;
}

ResonantPairReport resonant_pair_check(const MultiplicativeSet& B, const RepresentativeSet& D, double alpha,
                                       double T, int R) {
  const WeightedKernel kernel = make_kernel(T, alpha);
  if (R < 1 || R > B.M) throw InvalidArgument("resonant_pair_check: R must be in [1, M]");
  if (D.M != B.M) throw InvalidArgument("resonant_pair_check: D was not built from B");
  const FrequencyThresholds th = frequency_thresholds(T, alpha);
  const quad qa = alpha;
  ResonantPairReport rep;
  rep.R = R;
  rep.alpha = alpha;
  rep.T = T;
  for (std::size_t k = 0; k < D.K(); ++k) {
    const ResonatorInteger& dk = D.elements[k];
    const std::uint64_t mask = dk.exponents.mask();
    const mpz_class dk_exact = dk.exact();
    ResonantPairEntry e;
    e.k = k;
    std::set<std::uint32_t> targets;
    NeumaierSum contribution;
    for_each_subset(B.M, R, [&](std::uint64_t diff) {
      const std::uint64_t other = mask ^ diff;
      const std::uint32_t idx = B.index_of_mask[other];
      const ResonatorInteger& b = B.elements[idx];
      const std::uint32_t kh = D.representative_of[idx];
      const ResonatorInteger& dkh = D.elements[kh];
      const std::uint64_t g = mask & other;
      const std::uint64_t m1_mask = other & ~g;
      const std::uint64_t n1_mask = mask & ~g;
      const mpz_class m1 = exponent_product_mpz(m1_mask);
      const mpz_class n1 = exponent_product_mpz(n1_mask);
      ++e.quadruples;
      if (m1 * dk_exact == n1 * b.exact()) ++e.exact_with_element;
      if (m1 * dk_exact == n1 * dkh.exact()) ++e.exact_with_representative;
      if (kh == k || !targets.insert(kh).second) e.targets_distinct = false;
      const quad lm1 = exponent_log(m1_mask);
      const quad ln1 = exponent_log(n1_mask);
      const quad a = fabs_q((lm1 - ln1) + (dk.log_value - dkh.log_value));
      if (classify_frequency(a, th) == FrequencyClass::Type1) ++e.within_type1;
      if (m1 <= mpz_class(static_cast<unsigned long>(std::floor(T))) &&
          n1 <= mpz_class(static_cast<unsigned long>(std::floor(T)))) {
        ++e.mn_within_T;
      }
      const double amp = static_cast<double>(exp_q(-qa * (lm1 + ln1)));
      contribution += amp * weighted_cos_integral(static_cast<double>(a), kernel);
    });
    e.contribution = contribution.value();
    e.restricted_sum = gcd_sum_distance_restricted(B, D.source_index[k], R, alpha).value;
    e.bound = T / 4 * e.restricted_sum;
    e.bound_holds = e.contribution >= e.bound;
    rep.quadruples += e.quadruples;
    rep.all_exact = rep.all_exact && e.exact_with_representative == e.quadruples;
    rep.all_type1 = rep.all_type1 && e.within_type1 == e.quadruples;
    rep.all_distinct = rep.all_distinct && e.targets_distinct;
    rep.all_bounds = rep.all_bounds && e.bound_holds;
    rep.entries.push_back(e);
  }
  std::vector<double> c, b;
  for (const auto& e : rep.entries) {
    c.push_back(e.contribution);
    b.push_back(e.bound);
  }
  rep.total_contribution = pairwise_sum(c);
  rep.total_bound = pairwise_sum(b);
  return rep;
}

TailReport type3_tail_sum(const ResonatorInteger& dk, const ResonatorInteger& dl, double alpha, double T,
                          const TailOptions& options) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (1/2, 1), got " + fmt17(alpha));
  if (!(T >= 2)) throw InvalidArgument("type3_tail_sum: T must be >= 2");
  if (T > options.max_T) {
    throw ResourceRefusal("type3_tail_sum: T = " + fmt17(T) + " exceeds the desk cap " + fmt17(options.max_T));
  }
  if (dk.exponents.length() != dl.exponents.length()) {
    throw InvalidArgument("type3_tail_sum: exponent vectors differ in length");
  }
  TailProblem p;
  p.mask_k = dk.exponents.mask();
  p.mask_l = dl.exponents.mask();
  p.limit = static_cast<std::uint64_t>(std::floor(T));
  p.alpha = alpha;
  p.cutoff = frequency_thresholds(T, alpha).type2;
  const TailSums s = parallel::type3_tail(p);
  TailReport rep;
  rep.alpha = alpha;
  rep.T = T;
  rep.limit = p.limit;
  rep.upper_part = s.upper;
  rep.lower_part = s.lower;
  rep.value = s.total();
  rep.terms = s.count_upper + s.count_lower;
  rep.normalized = rep.value / (std::pow(T, 2 - 2 * alpha) * std::log(T));
  return rep;
}

ResonanceQuadrature resonance_integral_quadrature(const RepresentativeSet& D, double alpha, double T,
                                                  const ResonanceQuadratureOptions& options) {
  const WeightedKernel kernel = make_kernel(T, alpha);
  if (T > options.max_T) {
    throw ResourceRefusal("resonance_integral_quadrature: T = " + fmt17(T) + " exceeds the desk cap " +
                          fmt17(options.max_T));
  }
  if (D.K() == 0) throw InvalidArgument("resonance_integral_quadrature: empty representative set");
  const std::uint64_t N = options.series_terms.value_or(static_cast<std::uint64_t>(std::floor(T)));
  if (N < 1) throw InvalidArgument("resonance_integral_quadrature: series needs at least one term");
  const DirichletSeries zs = zeta_series(alpha, N);
  const auto logs = element_logs(D);
  const DirichletSeries as = unit_series(logs);
  const double a_max = static_cast<double>(D.elements.back().log_value) + std::log(static_cast<double>(N));
  QuadratureOptions q;
  q.max_step = std::numbers::pi / (8 * std::max(a_max, 1.0));
  q.rtol = options.rtol;

  auto piece = [&](double lo, double hi, double offset) {
    GridFunction f = [&, offset](double t0, double h, std::size_t count) {
      const auto z = parallel::dirichlet_grid(zs, t0, h, count);
      const auto A = parallel::dirichlet_grid(as, t0, h, count);
      std::vector<double> v(count);
      for (std::size_t j = 0; j < count; ++j) {
        const double t = t0 + static_cast<double>(j) * h;
        v[j] = std::norm(z[j]) * std::norm(A[j]) * (offset - t / T);
      }
      return v;
    };
    return simpson_adaptive(f, lo, hi, q);
  };
  const QuadratureResult first = piece(kernel.lower, kernel.breakpoint, 3.0);
  const QuadratureResult second = piece(kernel.breakpoint, kernel.upper, 1.0);
  ResonanceQuadrature out;
  out.value = first.value + second.value;
  out.error_estimate = first.error_estimate + second.error_estimate;
  out.step = std::min(first.step, second.step);
  out.evaluations = first.evaluations + second.evaluations;
  out.converged = first.converged && second.converged;
  return out;
}

}  // namespace zr
