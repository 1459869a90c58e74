#pragma once

// zeta(alpha + it) in the strip: partial Dirichlet sums (plain and with the
// x^{1-s}/(s-1) correction) and an Euler-Maclaurin reference carried in
// binary128.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "zetares/phase.hpp"
#include "zetares/quad.hpp"

namespace zr {

enum class ZetaMethod { truncated, corrected, reference };
std::string to_string(ZetaMethod m);
ZetaMethod parse_zeta_method(const std::string& name);

struct ZetaSample {
  double alpha = 0;
  double t = 0;
  std::complex<double> value;
  ZetaMethod method = ZetaMethod::reference;
  double est_error = 0;
};

struct CorrectedOptions {
  double C = 2.0;               // validity: 2 pi x >= C |t|
  double error_constant = 1.0;  // est_error = c x^{-alpha}
};

// sum_{n<=x} n^{-s} + x^{1-s}/(s-1).
ZetaSample zeta_corrected(double alpha, double t, double x, const CorrectedOptions& options = {});
// x^{1-s}/(s-1) alone.
std::complex<double> zeta_correction_term(double alpha, double t, double x);

struct TruncatedOptions {
  double error_constant = 2.0;  // the O(1) term; measured, see the acceptance report
};

// sum_{n<=floor(T)} n^{-s}, for t in [T^{1-alpha}, T].
ZetaSample zeta_truncated(double alpha, double t, double T, const TruncatedOptions& options = {});

// Shared n^{-alpha} tables, cached per (alpha, N).
std::shared_ptr<const DirichletSeries> cached_zeta_series(double alpha, std::uint64_t N);

// [T^{1-alpha}, T] with a 1e-12 relative allowance for the rounding in
// T^{1-alpha} itself.
bool in_truncated_window(double alpha, double t, double T);

struct ComplexQ {
  quad re = 0;
  quad im = 0;
};

struct ReferenceOptions {
  double max_t = 1e7;
};

struct ReferenceDetail {
  ComplexQ value;
  std::uint64_t N = 0;        // terms summed directly (n < N)
  int correction_terms = 0;   // Bernoulli terms used
  quad last_term = 0;         // modulus of the last correction term
};

ZetaSample zeta_reference(double alpha, double t, int target_digits, const ReferenceOptions& options = {});
ReferenceDetail zeta_reference_detail(double alpha, double t, int target_digits,
                                      const ReferenceOptions& options = {});
// Euler-Maclaurin with explicit parameters (used by the self-consistency check).
ComplexQ zeta_euler_maclaurin(double alpha, double t, std::uint64_t N, int correction_terms);

// B_{2j}/(2j)!, j = 1..count, exact rationals rounded to binary128.
const std::vector<quad>& bernoulli_over_factorial(int count);

// |sum_{n<=floor(T)} n^{-alpha-it}| on a uniform grid.
std::vector<double> batch_zeta_modulus(double alpha, std::span<const double> t_grid, double T);

}  // namespace zr
