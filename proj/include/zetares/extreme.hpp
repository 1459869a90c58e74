#pragma once

// Large values of |zeta(alpha+it)| on [0, T]: the explicit lower-bound
// formulas, a grid-plus-refinement maximum search, and a stratified Monte
// Carlo estimate of the measure of the level set above the threshold.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zr {

// 0.18 (2 alpha - 1)^{1-alpha}.
double theorem1_constant(double alpha);
// exp(c_alpha (log T)^{1-alpha} / (log log T)^alpha).
double theorem1_bound(double alpha, double T);
// exp(0.2 (2 alpha - 1)^{1-alpha} log T / log log T).
double err_threshold(double alpha, double T);

struct Theorem2Exponent {
  double beta = 0;            // (6 tau)^{1/(1-alpha)}
  double floor_exponent = 0;  // 2 alpha - 1 - beta
};

// Largest admissible tau is (2 alpha - 1)^{1-alpha} / 6 (exclusive).
double tau_limit(double alpha);
Theorem2Exponent theorem2_exponent(double alpha, double tau);
// exp(tau (log T)^{1-alpha} / (log log T)^alpha).
double level_threshold(double alpha, double tau, double T);

// |zeta| as used by the search and the measure estimate: below T^{1-alpha}
// the corrected sum with x = max(2t, 100); from T^{1-alpha} on the sum over
// n <= T plus the correction term at x = T.
double search_modulus(double alpha, double t, double T);

struct SearchOptions {
  double max_T = 1e5;
  std::size_t candidates = 16;
  bool keep_grid = false;
};

struct GridPoint {
  double t = 0;
  double modulus = 0;
};

struct SearchResult {
  double alpha = 0;
  double T = 0;
  double t_star = 0;
  double max_modulus = 0;
  double coarse_max = 0;
  double grid_step = 0;
  int refinement_depth = 0;
  std::size_t grid_points = 0;
  double theorem1_bound = 0;
  bool exceeded = false;
  std::string region;        // "[0,T^(1-alpha))" or "[T^(1-alpha),T]"
  std::vector<GridPoint> grid;  // when keep_grid
};

SearchResult search_max(double alpha, double T, double grid_step, int refinement_depth,
                        const SearchOptions& options = {});

struct MeasureOptions {
  double max_T = 1e5;
  bool keep_samples = false;
};

struct MeasureSample {
  double t = 0;
  double modulus = 0;
  bool above = false;
};

struct MeasureReport {
  double alpha = 0;
  double tau = 0;
  double T = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t strata = 0;
  std::uint64_t above = 0;
  double threshold = 0;
  double sampled_fraction = 0;
  double estimated_measure = 0;
  double standard_error = 0;
  double theorem2_floor = 0;
  double beta = 0;
  double floor_exponent = 0;
  std::vector<MeasureSample> per_sample;  // when keep_samples, stratum order
};

MeasureReport measure_estimate(double alpha, double tau, double T, std::uint64_t samples, std::uint64_t seed,
                               const MeasureOptions& options = {});

}  // namespace zr
