#pragma once

// The resonator A(t) = sum_k d_k^{it}, the weight w on [T^{1-a}, T], the
// three frequency classes and the resonance integral
//   int |zeta(a+it) A(t)|^2 w(t) dt
// both by quadrature and through its exact (k, l, m, n) decomposition.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zetares/quad.hpp"
#include "zetares/quadrature.hpp"
#include "zetares/resonator.hpp"

namespace zr {

struct WeightedKernel {
  double T = 0;
  double alpha = 0;
  double lower = 0;       // T^{1-alpha}
  double breakpoint = 0;  // 2 T^{1-alpha}
  double upper = 0;       // T
};

// Requires 2 T^{1-alpha} <= T.
WeightedKernel make_kernel(double T, double alpha);

enum class FrequencyClass { Type1 = 0, Type2 = 1, Type3 = 2 };
std::string to_string(FrequencyClass c);

struct FrequencyThresholds {
  quad type1 = 0;  // 1/T
  quad type2 = 0;  // 1/(2 T^{1-alpha})
};

FrequencyThresholds frequency_thresholds(double T, double alpha);
FrequencyClass classify_frequency(quad a, const FrequencyThresholds& th);
FrequencyClass classify_frequency(double a, double T, double alpha);

std::complex<double> resonator_eval(const RepresentativeSet& D, double t);
std::vector<std::complex<double>> resonator_grid(const RepresentativeSet& D, double t0, double h, std::size_t count);
// prod_{r<=M} (1 + p_r^{it}).
std::complex<double> euler_product_eval(int M, double t);

double weight(double t, const WeightedKernel& kernel);

// int_0^T cos(at)(1 - t/T) dt = (1 - cos aT)/(a^2 T); T/2 at a = 0.
double triangle_cos_integral(double a, double T);
// int_{T^{1-alpha}}^T cos(at) w(t) dt.
double weighted_cos_integral(double a, const WeightedKernel& kernel);

struct SquareIntegralReport {
  std::size_t K = 0;
  double T = 0;
  double closed_form = 0;
  std::optional<QuadratureResult> quadrature;
  double triangle_bound = 0;   // K^2 T
  double l2_bound = 0;         // 11 K T (1 + log K)
  double l2_bound_ratio = 0;   // closed_form / l2_bound
};

struct SquareIntegralOptions {
  bool with_quadrature = false;
  double rtol = 1e-9;
  std::uint64_t max_pairs = std::uint64_t{1} << 30;
};

// KT + 2 sum_{k<l} sin(T log(d_l/d_k)) / log(d_l/d_k).
double resonator_square_integral(const RepresentativeSet& D, double T);
SquareIntegralReport square_integral_report(const RepresentativeSet& D, double T,
                                            const SquareIntegralOptions& options = {});

struct ResonanceDecomposition {
  double alpha = 0;
  double T = 0;
  std::size_t K = 0;
  std::uint64_t mn_limit = 0;
  double type1_sum = 0;
  double type2_sum = 0;
  double type3_sum = 0;
  double total = 0;
  std::uint64_t count[3] = {0, 0, 0};
};

struct DecompositionOptions {
  double max_operations = 1e9;
};

ResonanceDecomposition frequency_decomposition(const RepresentativeSet& D, double alpha, double T,
                                               std::uint64_t mn_limit, const DecompositionOptions& options = {});

// Resonant quadruples (m1, n1, k, k_h) built from the elements at distance R
// from each representative.
struct ResonantPairEntry {
  std::size_t k = 0;                     // index in D (0-based)
  std::uint64_t quadruples = 0;
  std::uint64_t exact_with_element = 0;  // m1 d_k = n1 b   (b the distance-R element)
  std::uint64_t exact_with_representative = 0;  // m1 d_k = n1 d_{k_h}
  std::uint64_t within_type1 = 0;        // |log(m1 d_k / (n1 d_{k_h}))| <= 1/T
  std::uint64_t mn_within_T = 0;         // m1, n1 <= T
  bool targets_distinct = true;          // k_1..k_H pairwise distinct and != k
  double contribution = 0;               // sum (m1 n1)^{-a} W(a)
  double restricted_sum = 0;             // sum over delta = R of gcd terms
  double bound = 0;                      // (T/4) restricted_sum
  bool bound_holds = false;
};

struct ResonantPairReport {
  int R = 0;
  double alpha = 0;
  double T = 0;
  std::vector<ResonantPairEntry> entries;
  std::uint64_t quadruples = 0;
  bool all_exact = true;        // exact equality with the representative
  bool all_type1 = true;
  bool all_distinct = true;
  bool all_bounds = true;
  double total_contribution = 0;
  double total_bound = 0;
};

ResonantPairReport resonant_pair_check(const MultiplicativeSet& B, const RepresentativeSet& D, double alpha,
                                       double T, int R);

struct TailOptions {
  double max_T = 2000;
};

struct TailReport {
  double alpha = 0;
  double T = 0;
  std::uint64_t limit = 0;
  double value = 0;
  double upper_part = 0;   // n d_l >= m d_k
  double lower_part = 0;   // the mirrored case
  std::uint64_t terms = 0;
  double normalized = 0;   // value / (T^{2-2a} log T)
};

// sum over m, n <= T with |log(m d_k/(n d_l))| > 1/(2 T^{1-a}) of
// (mn)^{-a} / |log(m d_k/(n d_l))|.
TailReport type3_tail_sum(const ResonatorInteger& dk, const ResonatorInteger& dl, double alpha, double T,
                          const TailOptions& options = {});

struct ResonanceQuadratureOptions {
  double max_T = 1e4;
  double rtol = 1e-4;
  std::optional<std::uint64_t> series_terms;  // default floor(T)
};

struct ResonanceQuadrature {
  double value = 0;
  double error_estimate = 0;
  double step = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

ResonanceQuadrature resonance_integral_quadrature(const RepresentativeSet& D, double alpha, double T,
                                                  const ResonanceQuadratureOptions& options = {});

}  // namespace zr
