#pragma once

// Hot loops. Every kernel exists twice with identical per-item arithmetic:
// zr::serial (plain loops, the reference) and zr::parallel (OpenMP). Work
// items write to fixed slots and are reduced in a fixed order, so both
// give bit-identical results for any thread count.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "zetares/phase.hpp"
#include "zetares/quad.hpp"

namespace zr {

// Points per reseed in the incremental grid kernel.
inline constexpr std::size_t kGridBlock = 128;

// Decomposition of sum_{k,l} sum_{m,n<=L} (mn)^{-a} W(|log(m d_k / n d_l)|).
struct DecompositionProblem {
  std::vector<std::uint64_t> masks;  // exponent masks of d_1..d_K
  std::uint64_t mn_limit = 1;
  double alpha = 0.75;
  double T = 100;
};

struct ClassSums {
  double sum[3] = {0, 0, 0};
  std::uint64_t count[3] = {0, 0, 0};
};

// Partial sums for one ordered pair (k, l).
ClassSums decomposition_pair(const DecompositionProblem& p, std::size_t k, std::size_t l,
                             std::span<const quad> log_table, std::span<const double> pow_table);

struct TailProblem {
  std::uint64_t mask_k = 0;
  std::uint64_t mask_l = 0;
  std::uint64_t limit = 1;   // m, n <= limit
  double alpha = 0.75;
  quad cutoff = 0;           // frequencies strictly above this are summed
};

struct TailSums {
  double upper = 0;          // n d_l >= m d_k
  double lower = 0;          // n d_l < m d_k
  std::uint64_t count_upper = 0;
  std::uint64_t count_lower = 0;
  double total() const { return upper + lower; }
};

namespace serial {

std::complex<double> dirichlet_point(const DirichletSeries& s, double t);
std::vector<std::complex<double>> dirichlet_grid(const DirichletSeries& s, double t0, double h, std::size_t count);
std::vector<std::complex<double>> dirichlet_points(const DirichletSeries& s, std::span<const double> ts);
double gcd_double_sum(std::span<const u128> values, double alpha);
std::vector<ClassSums> decomposition(const DecompositionProblem& p);
TailSums type3_tail(const TailProblem& p);

}  // namespace serial

namespace parallel {

std::vector<std::complex<double>> dirichlet_grid(const DirichletSeries& s, double t0, double h, std::size_t count);
std::vector<std::complex<double>> dirichlet_points(const DirichletSeries& s, std::span<const double> ts);
double gcd_double_sum(std::span<const u128> values, double alpha);
std::vector<ClassSums> decomposition(const DecompositionProblem& p);
TailSums type3_tail(const TailProblem& p);

}  // namespace parallel

// Shared building blocks, exposed so both variants use the same code.
namespace detail {

void grid_block(const DirichletSeries& s, double t0, double h, std::size_t first, std::size_t count,
                std::complex<double>* out);
double gcd_row(std::span<const u128> values, std::span<const double> logs, std::size_t k, double alpha);
std::vector<double> element_logs(std::span<const u128> values);
std::vector<quad> log_table(std::uint64_t limit);
std::vector<double> pow_table(std::uint64_t limit, double alpha);
ClassSums merge(std::span<const ClassSums> parts);
TailSums tail_row(const TailProblem& p, std::uint64_t m, std::span<const quad> log_table,
                  std::span<const double> pow_table);
TailSums merge_tail(std::span<const TailSums> rows);

}  // namespace detail

}  // namespace zr
