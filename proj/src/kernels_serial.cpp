#include <cmath>

#include "zetares/error.hpp"
#include "zetares/kernels.hpp"
#include "zetares/resonance.hpp"
#include "zetares/resonator.hpp"
#include "zetares/summation.hpp"

namespace zr {

namespace detail {

void grid_block(const DirichletSeries& s, double t0, double h, std::size_t first, std::size_t count,
                std::complex<double>* out) {
  double re[kGridBlock] = {};
  double im[kGridBlock] = {};
  const double ts = t0 + static_cast<double>(first) * h;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const std::complex<double> p = phasor(ts, s.freq[n]);
    double zr_ = s.amp[n] * p.real();
    double zi = s.amp[n] * p.imag();
    re[0] += zr_;
    im[0] += zi;
    if (count == 1) continue;
    const std::complex<double> r = phasor(h, s.freq[n]);
    const double rr = r.real();
    const double ri = r.imag();
    for (std::size_t j = 1; j < count; ++j) {
      const double nr = zr_ * rr - zi * ri;
      zi = zr_ * ri + zi * rr;
      zr_ = nr;
      re[j] += zr_;
      im[j] += zi;
    }
  }
  for (std::size_t j = 0; j < count; ++j) out[j] = {re[j], im[j]};
}

std::vector<double> element_logs(std::span<const u128> values) {
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) logs[i] = static_cast<double>(log_q(to_quad(values[i])));
  return logs;
}

double gcd_row(std::span<const u128> values, std::span<const double> logs, std::size_t k, double alpha) {
  NeumaierSum row;
  const u128 vk = values[k];
  const double lk = logs[k];
  for (std::size_t l = 0; l < values.size(); ++l) {
    const u128 g = gcd_u128(vk, values[l]);
    double lg;
    if (g == 1) {
      lg = 0;
    } else if (g == vk) {
      lg = lk;
    } else if (g == values[l]) {
      lg = logs[l];
    } else {
      lg = std::log(static_cast<double>(g));
    }
    row += std::exp(alpha * (2 * lg - lk - logs[l]));
  }
  return row.value();
}

std::vector<quad> log_table(std::uint64_t limit) {
  std::vector<quad> t(limit + 1, 0);
  for (std::uint64_t m = 2; m <= limit; ++m) t[m] = log_q(static_cast<quad>(m));
  return t;
}

std::vector<double> pow_table(std::uint64_t limit, double alpha) {
  std::vector<double> t(limit + 1, 0);
  const quad a = alpha;
  for (std::uint64_t m = 1; m <= limit; ++m) t[m] = static_cast<double>(exp_q(-a * log_q(static_cast<quad>(m))));
  return t;
}

ClassSums merge(std::span<const ClassSums> parts) {
  ClassSums out;
  std::vector<double> v(parts.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      v[i] = parts[i].sum[c];
      out.count[c] += parts[i].count[c];
    }
    out.sum[c] = pairwise_sum(v);
  }
  return out;
}

TailSums tail_row(const TailProblem& p, std::uint64_t m, std::span<const quad> logs, std::span<const double> pw) {
  const std::uint64_t ck = p.mask_k & ~p.mask_l;
  const std::uint64_t cl = p.mask_l & ~p.mask_k;
  const quad c = exponent_log(ck) - exponent_log(cl);
  TailSums out;
  NeumaierSum up, lo;
  for (std::uint64_t n = 1; n <= p.limit; ++n) {
    // log(m d_k / (n d_l))
    const quad x = (logs[m] - logs[n]) + c;
    const quad a = fabs_q(x);
    if (!(a > p.cutoff)) continue;
    const double term = pw[m] * pw[n] / static_cast<double>(a);
    if (x <= 0) {
      up += term;
      ++out.count_upper;
    } else {
      lo += term;
      ++out.count_lower;
    }
  }
  out.upper = up.value();
  out.lower = lo.value();
  return out;
}

TailSums merge_tail(std::span<const TailSums> rows) {
  TailSums out;
  std::vector<double> u(rows.size()), l(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    u[i] = rows[i].upper;
    l[i] = rows[i].lower;
    out.count_upper += rows[i].count_upper;
    out.count_lower += rows[i].count_lower;
  }
  out.upper = pairwise_sum(u);
  out.lower = pairwise_sum(l);
  return out;
}

}  // namespace detail

ClassSums decomposition_pair(const DecompositionProblem& p, std::size_t k, std::size_t l,
                             std::span<const quad> logs, std::span<const double> pw) {
  const std::uint64_t mk = p.masks[k];
  const std::uint64_t ml = p.masks[l];
  // Shared primes cancel: m d_k = n d_l  <=>  m ck = n cl with gcd(ck, cl) = 1.
  const std::uint64_t ck_mask = mk & ~ml;
  const std::uint64_t cl_mask = ml & ~mk;
  const u128 ck = exponent_product(ck_mask);
  const u128 cl = exponent_product(cl_mask);
  const quad c = exponent_log(ck_mask) - exponent_log(cl_mask);
  const FrequencyThresholds th = frequency_thresholds(p.T, p.alpha);
  const WeightedKernel kernel = make_kernel(p.T, p.alpha);
  const u128 limit = p.mn_limit;
  NeumaierSum acc[3];
  ClassSums out;
  for (std::uint64_t m = 1; m <= p.mn_limit; ++m) {
    // The unique n with m ck = n cl, if any: cl | m and n = (m / cl) ck.
    u128 n_eq = 0;
    if (cl <= m && m % cl == 0) {
      const u128 j = m / cl;
      if (ck <= limit / j) n_eq = j * ck;
    }
    for (std::uint64_t n = 1; n <= p.mn_limit; ++n) {
      quad a = 0;
      if (n_eq != n) a = fabs_q((logs[m] - logs[n]) + c);
      const int cls = static_cast<int>(classify_frequency(a, th));
      acc[cls] += pw[m] * pw[n] * weighted_cos_integral(static_cast<double>(a), kernel);
      ++out.count[cls];
    }
  }
  for (int i = 0; i < 3; ++i) out.sum[i] = acc[i].value();
  return out;
}

namespace serial {

std::complex<double> dirichlet_point(const DirichletSeries& s, double t) {
  double re = 0;
  double im = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const std::complex<double> p = phasor(t, s.freq[n]);
    re += s.amp[n] * p.real();
    im += s.amp[n] * p.imag();
  }
  return {re, im};
}

std::vector<std::complex<double>> dirichlet_grid(const DirichletSeries& s, double t0, double h,
                                                 std::size_t count) {
  std::vector<std::complex<double>> out(count);
  for (std::size_t b = 0; b < count; b += kGridBlock) {
    detail::grid_block(s, t0, h, b, std::min(kGridBlock, count - b), out.data() + b);
  }
  return out;
}

std::vector<std::complex<double>> dirichlet_points(const DirichletSeries& s, std::span<const double> ts) {
  std::vector<std::complex<double>> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = dirichlet_point(s, ts[i]);
  return out;
}

double gcd_double_sum(std::span<const u128> values, double alpha) {
  const auto logs = detail::element_logs(values);
  std::vector<double> rows(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) rows[k] = detail::gcd_row(values, logs, k, alpha);
  return pairwise_sum(rows);
}

std::vector<ClassSums> decomposition(const DecompositionProblem& p) {
  const auto logs = detail::log_table(p.mn_limit);
  const auto pw = detail::pow_table(p.mn_limit, p.alpha);
  const std::size_t K = p.masks.size();
  std::vector<ClassSums> parts(K * K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < K; ++l) parts[k * K + l] = decomposition_pair(p, k, l, logs, pw);
  }
  return parts;
}

TailSums type3_tail(const TailProblem& p) {
  const auto logs = detail::log_table(p.limit);
  const auto pw = detail::pow_table(p.limit, p.alpha);
  std::vector<TailSums> rows(p.limit);
  for (std::uint64_t m = 1; m <= p.limit; ++m) rows[m - 1] = detail::tail_row(p, m, logs, pw);
  return detail::merge_tail(rows);
}

}  // namespace serial

}  // namespace zr
