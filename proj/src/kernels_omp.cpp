#include "zetares/kernels.hpp"
#include "zetares/summation.hpp"

namespace zr::parallel {

std::vector<std::complex<double>> dirichlet_grid(const DirichletSeries& s, double t0, double h,
                                                 std::size_t count) {
  std::vector<std::complex<double>> out(count);
  const auto blocks = static_cast<std::int64_t>((count + kGridBlock - 1) / kGridBlock);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t first = static_cast<std::size_t>(b) * kGridBlock;
    detail::grid_block(s, t0, h, first, std::min(kGridBlock, count - first), out.data() + first);
  }
  return out;
}

std::vector<std::complex<double>> dirichlet_points(const DirichletSeries& s, std::span<const double> ts) {
  std::vector<std::complex<double>> out(ts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(ts.size()); ++i) {
    out[static_cast<std::size_t>(i)] = serial::dirichlet_point(s, ts[static_cast<std::size_t>(i)]);
  }
  return out;
}

double gcd_double_sum(std::span<const u128> values, double alpha) {
  const auto logs = detail::element_logs(values);
  std::vector<double> rows(values.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(values.size()); ++k) {
    rows[static_cast<std::size_t>(k)] = detail::gcd_row(values, logs, static_cast<std::size_t>(k), alpha);
  }
  return pairwise_sum(rows);
}

std::vector<ClassSums> decomposition(const DecompositionProblem& p) {
  const auto logs = detail::log_table(p.mn_limit);
  const auto pw = detail::pow_table(p.mn_limit, p.alpha);
  const std::size_t K = p.masks.size();
  std::vector<ClassSums> parts(K * K);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(K * K); ++i) {
    const auto u = static_cast<std::size_t>(i);
    parts[u] = decomposition_pair(p, u / K, u % K, logs, pw);
  }
  return parts;
}

TailSums type3_tail(const TailProblem& p) {
  const auto logs = detail::log_table(p.limit);
  const auto pw = detail::pow_table(p.limit, p.alpha);
  std::vector<TailSums> rows(p.limit);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t m = 1; m <= static_cast<std::int64_t>(p.limit); ++m) {
    rows[static_cast<std::size_t>(m - 1)] = detail::tail_row(p, static_cast<std::uint64_t>(m), logs, pw);
  }
  return detail::merge_tail(rows);
}

}  // namespace zr::parallel
