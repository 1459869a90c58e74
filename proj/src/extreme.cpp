#include "zetares/extreme.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "zetares/error.hpp"
#include "zetares/kernels.hpp"
#include "zetares/quad.hpp"
#include "zetares/zeta.hpp"

namespace zr {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (1/2, 1), got " + fmt17(alpha));
}

void require_T16(double T) {
  if (!(T >= 16) || !std::isfinite(T)) throw InvalidArgument("T must be >= 16, got " + fmt17(T));
}

constexpr double kGolden = 0.61803398874989484820;

}  // namespace

double theorem1_constant(double alpha) {
  require_alpha(alpha);
  return 0.18 * std::pow(2 * alpha - 1, 1 - alpha);
}

double theorem1_bound(double alpha, double T) {
  require_alpha(alpha);
  require_T16(T);
  const double lt = std::log(T);
  return std::exp(theorem1_constant(alpha) * std::pow(lt, 1 - alpha) / std::pow(std::log(lt), alpha));
}

double err_threshold(double alpha, double T) {
  require_alpha(alpha);
  require_T16(T);
  const double lt = std::log(T);
  return std::exp(0.2 * std::pow(2 * alpha - 1, 1 - alpha) * lt / std::log(lt));
}

double tau_limit(double alpha) {
  require_alpha(alpha);
  return std::pow(2 * alpha - 1, 1 - alpha) / 6;
}

Theorem2Exponent theorem2_exponent(double alpha, double tau) {
  const double limit = tau_limit(alpha);
  if (!(tau > 0 && tau < limit)) {
    throw InvalidArgument("tau must satisfy 0 < tau < (2 alpha - 1)^(1-alpha)/6 = " + fmt17(limit) + ", got " +
                          fmt17(tau));
  }
  Theorem2Exponent e;
  e.beta = std::pow(6 * tau, 1 / (1 - alpha));
  e.floor_exponent = 2 * alpha - 1 - e.beta;
  if (!(e.floor_exponent > 0)) {
    throw InvalidArgument("tau = " + fmt17(tau) + " leaves no positive floor exponent at working precision");
  }
  return e;
}

double level_threshold(double alpha, double tau, double T) {
  require_alpha(alpha);
  require_T16(T);
  const double lt = std::log(T);
  return std::exp(tau * std::pow(lt, 1 - alpha) / std::pow(std::log(lt), alpha));
}

double search_modulus(double alpha, double t, double T) {
  if (!in_truncated_window(alpha, t, T)) {
    return std::abs(zeta_corrected(alpha, t, std::max(2 * std::fabs(t), 100.0)).value);
  }
  const auto series = cached_zeta_series(alpha, static_cast<std::uint64_t>(std::floor(T)));
  return std::abs(serial::dirichlet_point(*series, t) + zeta_correction_term(alpha, t, T));
}

SearchResult search_max(double alpha, double T, double grid_step, int refinement_depth,
                        const SearchOptions& options) {
  require_alpha(alpha);
  require_T16(T);
  if (T > options.max_T) {
    throw ResourceRefusal("search_max: T = " + fmt17(T) + " exceeds the desk cap " + fmt17(options.max_T));
  }
  if (!(grid_step > 0 && grid_step <= 0.1)) {
    throw InvalidArgument("search_max: grid_step must lie in (0, 0.1], got " + fmt17(grid_step));
  }
  if (refinement_depth < 0) throw InvalidArgument("search_max: refinement_depth must be >= 0");

  const auto J = static_cast<std::size_t>(std::floor(T / grid_step));
  std::vector<double> ts;
  ts.reserve(J + 2);
  for (std::size_t j = 0; j <= J; ++j) ts.push_back(static_cast<double>(j) * grid_step);
  if (ts.back() < T) ts.push_back(T);
  std::vector<double> mod(ts.size());

  std::size_t first_window = 0;
  while (first_window < ts.size() && !in_truncated_window(alpha, ts[first_window], T)) ++first_window;
  for (std::size_t j = 0; j < first_window; ++j) mod[j] = search_modulus(alpha, ts[j], T);
  // Uniform part of the window on the incremental kernel.
  std::size_t uniform_end = std::min(ts.size(), J + 1);
  if (first_window < uniform_end) {
    const auto series = cached_zeta_series(alpha, static_cast<std::uint64_t>(std::floor(T)));
    const std::size_t count = uniform_end - first_window;
    const auto z = parallel::dirichlet_grid(*series, ts[first_window], grid_step, count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const std::size_t j = first_window + static_cast<std::size_t>(i);
      mod[j] = std::abs(z[static_cast<std::size_t>(i)] + zeta_correction_term(alpha, ts[j], T));
    }
  }
  for (std::size_t j = std::max(first_window, uniform_end); j < ts.size(); ++j) {
    mod[j] = search_modulus(alpha, ts[j], T);
  }

  SearchResult res;
  res.alpha = alpha;
  res.T = T;
  res.grid_step = grid_step;
  res.refinement_depth = refinement_depth;
  res.grid_points = ts.size();
  res.theorem1_bound = theorem1_bound(alpha, T);
  std::size_t best = 0;
  for (std::size_t j = 1; j < ts.size(); ++j) {
    if (mod[j] > mod[best]) best = j;
  }
  res.coarse_max = mod[best];
  res.max_modulus = mod[best];
  res.t_star = ts[best];

  if (refinement_depth > 0) {
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const bool left = j == 0 || mod[j] >= mod[j - 1];
      const bool right = j + 1 == ts.size() || mod[j] >= mod[j + 1];
      if (left && right) peaks.push_back(j);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return mod[a] > mod[b]; });
    if (peaks.size() > options.candidates) peaks.resize(options.candidates);
    std::vector<GridPoint> refined(peaks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(peaks.size()); ++ci) {
      const std::size_t j = peaks[static_cast<std::size_t>(ci)];
      double lo = std::max(0.0, ts[j] - grid_step);
      double hi = std::min(T, ts[j] + grid_step);
      GridPoint bestp{ts[j], mod[j]};
      double x1 = hi - kGolden * (hi - lo);
      double x2 = lo + kGolden * (hi - lo);
      double f1 = search_modulus(alpha, x1, T);
      double f2 = search_modulus(alpha, x2, T);
      for (int it = 0; it < refinement_depth; ++it) {
        if (f1 > bestp.modulus) bestp = {x1, f1};
        if (f2 > bestp.modulus) bestp = {x2, f2};
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          f1 = search_modulus(alpha, x1, T);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          f2 = search_modulus(alpha, x2, T);
        }
      }
      if (f1 > bestp.modulus) bestp = {x1, f1};
      if (f2 > bestp.modulus) bestp = {x2, f2};
      refined[static_cast<std::size_t>(ci)] = bestp;
    }
    for (const auto& p : refined) {
      if (p.modulus > res.max_modulus) {
        res.max_modulus = p.modulus;
        res.t_star = p.t;
      }
    }
  }
  res.exceeded = res.max_modulus >= res.theorem1_bound;
  res.region = in_truncated_window(alpha, res.t_star, T) ? "[T^(1-alpha),T]" : "[0,T^(1-alpha))";
  if (options.keep_grid) {
    res.grid.reserve(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) res.grid.push_back({ts[j], mod[j]});
  }
  return res;
}

MeasureReport measure_estimate(double alpha, double tau, double T, std::uint64_t samples, std::uint64_t seed,
                               const MeasureOptions& options) {
  const Theorem2Exponent ex = theorem2_exponent(alpha, tau);
  require_T16(T);
  if (T > options.max_T) {
    throw ResourceRefusal("measure_estimate: T = " + fmt17(T) + " exceeds the desk cap " + fmt17(options.max_T));
  }
  if (samples == 0) throw InvalidArgument("measure_estimate: samples must be >= 1");
  MeasureReport rep;
  rep.alpha = alpha;
  rep.tau = tau;
  rep.T = T;
  rep.samples = samples;
  rep.seed = seed;
  rep.strata = std::min<std::uint64_t>(100, samples);
  rep.threshold = level_threshold(alpha, tau, T);
  rep.beta = ex.beta;
  rep.floor_exponent = ex.floor_exponent;
  rep.theorem2_floor = std::pow(T, ex.floor_exponent);

  const std::uint64_t S = rep.strata;
  const double width = T / static_cast<double>(S);
  std::vector<double> ts;
  ts.reserve(samples);
  std::vector<std::uint64_t> stratum_start(S + 1, 0);
  for (std::uint64_t i = 0; i < S; ++i) {
    stratum_start[i] = ts.size();
    const std::uint64_t n = samples / S + (i < samples % S ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 gen(seq);
    for (std::uint64_t s = 0; s < n; ++s) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      ts.push_back(static_cast<double>(i) * width + u * width);
    }
  }
  stratum_start[S] = ts.size();

  // Points inside the truncated window go through the batch kernel.
  std::vector<double> mod(ts.size());
  std::vector<double> window_t;
  std::vector<std::size_t> window_idx;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (in_truncated_window(alpha, ts[i], T)) {
      window_t.push_back(ts[i]);
      window_idx.push_back(i);
    } else {
      mod[i] = search_modulus(alpha, ts[i], T);
    }
  }
  const auto series = cached_zeta_series(alpha, static_cast<std::uint64_t>(std::floor(T)));
  const auto z = parallel::dirichlet_points(*series, window_t);
  for (std::size_t w = 0; w < window_t.size(); ++w) {
    mod[window_idx[w]] = std::abs(z[w] + zeta_correction_term(alpha, window_t[w], T));
  }

  double measure = 0;
  double var = 0;
  for (std::uint64_t i = 0; i < S; ++i) {
    std::uint64_t above = 0;
    for (std::uint64_t j = stratum_start[i]; j < stratum_start[i + 1]; ++j) {
      if (mod[j] >= rep.threshold) ++above;
    }
    const auto n = static_cast<double>(stratum_start[i + 1] - stratum_start[i]);
    const double p = static_cast<double>(above) / n;
    measure += width * p;
    var += width * width * p * (1 - p) / n;
    rep.above += above;
  }
  rep.estimated_measure = measure;
  rep.standard_error = std::sqrt(var);
  rep.sampled_fraction = static_cast<double>(rep.above) / static_cast<double>(samples);
  if (options.keep_samples) {
    rep.per_sample.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) rep.per_sample.push_back({ts[i], mod[i], mod[i] >= rep.threshold});
  }
  return rep;
}

}  // namespace zr
