#include "zetares/zeta.hpp"

#include <cmath>
#include <map>
#include <mpfr.h>
#include <mutex>
#include <numbers>

#include "zetares/error.hpp"
#include "zetares/kernels.hpp"

namespace zr {

namespace {

ComplexQ operator*(ComplexQ a, ComplexQ b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
ComplexQ operator*(quad s, ComplexQ a) { return {s * a.re, s * a.im}; }
ComplexQ operator/(ComplexQ a, ComplexQ b) {
  const quad d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
quad abs_q(ComplexQ a) { return sqrt_q(a.re * a.re + a.im * a.im); }

// n^{-s} for s = alpha + it.
ComplexQ power_neg_s(quad n, quad alpha, quad t) {
  const quad l = log_q(n);
  const quad m = exp_q(-alpha * l);
  return {m * cos_q(t * l), -m * sin_q(t * l)};
}

struct KahanQ {
  ComplexQ sum;
  ComplexQ comp;
  void add(ComplexQ x) {
    const quad yr = x.re - comp.re;
    const quad tr = sum.re + yr;
    comp.re = (tr - sum.re) - yr;
    sum.re = tr;
    const quad yi = x.im - comp.im;
    const quad ti = sum.im + yi;
    comp.im = (ti - sum.im) - yi;
    sum.im = ti;
  }
};

void require_alpha_strip(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (1/2, 1), got " + fmt17(alpha));
}

void require_alpha_any(double alpha, double t) {
  if (!std::isfinite(alpha) || !std::isfinite(t)) throw InvalidArgument("alpha and t must be finite");
  if (!(alpha > 0)) throw InvalidArgument("alpha must be positive, got " + fmt17(alpha));
  if (alpha == 1 && t == 0) throw DomainError("zeta has a pole at s = 1");
}

quad mpq_to_quad(const mpq_class& q) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, 40, x, MPFR_RNDN);
  std::string s(digits);
  mpfr_free_str(digits);
  mpfr_clear(x);
  std::string out;
  if (!s.empty() && s[0] == '-') {
    out = "-";
    s.erase(0, 1);
  }
  out += "0." + s + "e" + std::to_string(e);
  return parse_q(out);
}

}  // namespace

std::string to_string(ZetaMethod m) {
  switch (m) {
    case ZetaMethod::truncated:
      return "truncated";
    case ZetaMethod::corrected:
      return "corrected";
    case ZetaMethod::reference:
      return "reference";
  }
  return "?";
}

ZetaMethod parse_zeta_method(const std::string& name) {
  if (name == "truncated") return ZetaMethod::truncated;
  if (name == "corrected") return ZetaMethod::corrected;
  if (name == "reference") return ZetaMethod::reference;
  throw InvalidArgument("unknown zeta method '" + name + "' (expected truncated|corrected|reference)");
}

std::shared_ptr<const DirichletSeries> cached_zeta_series(double alpha, std::uint64_t N) {
  static std::mutex mu;
  static std::map<std::pair<double, std::uint64_t>, std::shared_ptr<const DirichletSeries>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(alpha, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() >= 8) cache.erase(cache.begin());
  auto s = std::make_shared<const DirichletSeries>(zeta_series(alpha, N));
  cache.emplace(key, s);
  return s;
}

std::complex<double> zeta_correction_term(double alpha, double t, double x) {
  const quad lx = log_q(static_cast<quad>(x));
  const std::complex<double> p = phasor(t, to_dd(lx));
  const double mag = static_cast<double>(exp_q((1 - static_cast<quad>(alpha)) * lx));
  return mag * p / std::complex<double>(alpha - 1, t);
}

ZetaSample zeta_corrected(double alpha, double t, double x, const CorrectedOptions& options) {
  require_alpha_any(alpha, t);
  if (alpha == 1) throw DomainError("zeta_corrected: the correction term is singular at alpha = 1");
  if (!(options.C > 1)) throw InvalidArgument("zeta_corrected: C must exceed 1, got " + fmt17(options.C));
  if (!(x >= 2)) throw DomainError("zeta_corrected: need x >= 2, got x = " + fmt17(x));
  if (!(2 * std::numbers::pi * x >= options.C * std::fabs(t))) {
    throw DomainError("zeta_corrected: validity condition 2*pi*x >= C*|t| violated (2*pi*x = " +
                      fmt17(2 * std::numbers::pi * x) + ", C*|t| = " + fmt17(options.C * std::fabs(t)) + ")");
  }
  const auto N = static_cast<std::uint64_t>(std::floor(x));
  const auto series = cached_zeta_series(alpha, N);
  ZetaSample z;
  z.alpha = alpha;
  z.t = t;
  z.method = ZetaMethod::corrected;
  z.value = serial::dirichlet_point(*series, t) + zeta_correction_term(alpha, t, x);
  z.est_error = options.error_constant * std::pow(x, -alpha);
  return z;
}

bool in_truncated_window(double alpha, double t, double T) {
  const double L = std::pow(T, 1 - alpha);
  return t >= L * (1 - 1e-12) && t <= T;
}

ZetaSample zeta_truncated(double alpha, double t, double T, const TruncatedOptions& options) {
  require_alpha_strip(alpha);
  if (!(T >= 1) || !std::isfinite(T)) throw InvalidArgument("zeta_truncated: T must be >= 1, got " + fmt17(T));
  if (!in_truncated_window(alpha, t, T)) {
    throw DomainError("zeta_truncated: t = " + fmt17(t) + " outside [T^(1-alpha), T] = [" +
                      fmt17(std::pow(T, 1 - alpha)) + ", " + fmt17(T) + "]");
  }
  const auto series = cached_zeta_series(alpha, static_cast<std::uint64_t>(std::floor(T)));
  ZetaSample z;
  z.alpha = alpha;
  z.t = t;
  z.method = ZetaMethod::truncated;
  z.value = serial::dirichlet_point(*series, t);
  z.est_error = options.error_constant;
  return z;
}

const std::vector<quad>& bernoulli_over_factorial(int count) {
  static std::mutex mu;
  static std::vector<quad> table;
  const std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(table.size()) >= count) return table;
  // Akiyama-Tanigawa for B_0..B_{2 count}, exact.
  const int n = 2 * count;
  std::vector<mpq_class> A(static_cast<std::size_t>(n) + 1);
  std::vector<mpq_class> B(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    A[static_cast<std::size_t>(m)] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      auto& a = A[static_cast<std::size_t>(j) - 1];
      a = j * (a - A[static_cast<std::size_t>(j)]);
      a.canonicalize();
    }
    B[static_cast<std::size_t>(m)] = A[0];
  }
  table.clear();
  mpz_class fact = 1;
  for (int j = 1; j <= count; ++j) {
    fact *= (2 * j - 1) * (2 * j);
    mpq_class q(B[static_cast<std::size_t>(2 * j)] / mpq_class(fact));
    q.canonicalize();
    table.push_back(mpq_to_quad(q));
  }
  return table;
}

ComplexQ zeta_euler_maclaurin(double alpha, double t, std::uint64_t N, int correction_terms) {
  require_alpha_any(alpha, t);
  if (N < 1) throw InvalidArgument("zeta_euler_maclaurin: N must be >= 1");
  const quad a = alpha;
  const quad qt = t;
  const ComplexQ s{a, qt};
  KahanQ acc;
  for (std::uint64_t n = 1; n < N; ++n) acc.add(power_neg_s(static_cast<quad>(n), a, qt));
  const quad qN = static_cast<quad>(N);
  const ComplexQ Ns = power_neg_s(qN, a, qt);  // N^{-s}
  acc.add((qN * Ns) / ComplexQ{a - 1, qt});
  acc.add(0.5Q * Ns);
  const auto& bf = bernoulli_over_factorial(std::max(correction_terms, 1));
  ComplexQ poch = s;                         // s (s+1) ... (s+2j-2)
  ComplexQ power = (1 / qN) * Ns;            // N^{-s-2j+1}
  const quad inv_n2 = 1 / (qN * qN);
  for (int j = 1; j <= correction_terms; ++j) {
    acc.add(bf[static_cast<std::size_t>(j - 1)] * (poch * power));
    poch = poch * ComplexQ{a + 2 * j - 1, qt} * ComplexQ{a + 2 * j, qt};
    power = inv_n2 * power;
  }
  return {acc.sum.re - acc.comp.re, acc.sum.im - acc.comp.im};
}

ReferenceDetail zeta_reference_detail(double alpha, double t, int target_digits, const ReferenceOptions& options) {
  require_alpha_any(alpha, t);
  if (target_digits < 1) throw InvalidArgument("zeta_reference: target_digits must be >= 1");
  if (target_digits > 30) {
    throw ResourceRefusal("zeta_reference: target_digits = " + std::to_string(target_digits) +
                          " exceeds the binary128 cap of 30");
  }
  if (std::fabs(t) > options.max_t) {
    throw ResourceRefusal("zeta_reference: |t| = " + fmt17(std::fabs(t)) + " exceeds the desk cap " +
                          fmt17(options.max_t));
  }
  constexpr int kMaxTerms = 120;
  const auto& bf = bernoulli_over_factorial(kMaxTerms);
  const quad a = alpha;
  const quad qt = t;
  const quad eps = exp_q(-static_cast<quad>(target_digits + 2) * log_q(10.0Q));
  std::uint64_t N = std::max<std::uint64_t>(16, static_cast<std::uint64_t>(std::ceil(std::fabs(t) / std::numbers::pi)) +
                                                    static_cast<std::uint64_t>(target_digits));
  for (int attempt = 0; attempt < 24; ++attempt, N *= 2) {
    // Walk the correction terms until they drop below eps |main|; restart
    // with a larger N if they start growing first.
    const quad qN = static_cast<quad>(N);
    const ComplexQ Ns = power_neg_s(qN, a, qt);
    const ComplexQ head = (qN * Ns) / ComplexQ{a - 1, qt};
    const quad scale = std::max(abs_q(head), 1e-30Q);
    ComplexQ poch{a, qt};
    ComplexQ power = (1 / qN) * Ns;
    const quad inv_n2 = 1 / (qN * qN);
    quad prev = 1e4000Q;
    int used = -1;
    quad last = 0;
    for (int j = 1; j <= kMaxTerms; ++j) {
      const quad mag = fabs_q(bf[static_cast<std::size_t>(j - 1)]) * abs_q(poch * power);
      if (mag > prev) break;
      prev = mag;
      last = mag;
      if (mag < eps * scale) {
        used = j;
        break;
      }
      poch = poch * ComplexQ{a + 2 * j - 1, qt} * ComplexQ{a + 2 * j, qt};
      power = inv_n2 * power;
    }
    if (used < 0) continue;
    ReferenceDetail d;
    d.N = N;
    d.correction_terms = used;
    d.last_term = last;
    d.value = zeta_euler_maclaurin(alpha, t, N, used);
    return d;
  }
  throw InvariantViolation("zeta_reference: Euler-Maclaurin failed to converge");
}

ZetaSample zeta_reference(double alpha, double t, int target_digits, const ReferenceOptions& options) {
  const ReferenceDetail d = zeta_reference_detail(alpha, t, target_digits, options);
  ZetaSample z;
  z.alpha = alpha;
  z.t = t;
  z.method = ZetaMethod::reference;
  z.value = {static_cast<double>(d.value.re), static_cast<double>(d.value.im)};
  const double rounding = 1e-33 * static_cast<double>(d.N);
  z.est_error = static_cast<double>(d.last_term) + rounding + 1e-16 * std::abs(z.value);
  return z;
}

std::vector<double> batch_zeta_modulus(double alpha, std::span<const double> t_grid, double T) {
  require_alpha_strip(alpha);
  if (t_grid.empty()) return {};
  for (const double t : t_grid) {
    if (!in_truncated_window(alpha, t, T)) {
      throw DomainError("batch_zeta_modulus: grid point " + fmt17(t) + " outside [T^(1-alpha), T]");
    }
  }
  const std::size_t n = t_grid.size();
  const double t0 = t_grid.front();
  const double h = n > 1 ? (t_grid.back() - t0) / static_cast<double>(n - 1) : 0.0;
  if (n > 1 && !(h > 0)) throw InvalidArgument("batch_zeta_modulus: grid must be ascending");
  const double tol = 1e-9 * std::max(1.0, std::fabs(t_grid.back()));
  for (std::size_t j = 0; j < n; ++j) {
    if (std::fabs(t_grid[j] - (t0 + static_cast<double>(j) * h)) > tol) {
      throw InvalidArgument("batch_zeta_modulus: grid is not uniform (point " + std::to_string(j) + ")");
    }
  }
  const auto series = cached_zeta_series(alpha, static_cast<std::uint64_t>(std::floor(T)));
  const auto z = parallel::dirichlet_grid(*series, t0, h, n);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = std::abs(z[j]);
  return out;
}

}  // namespace zr
