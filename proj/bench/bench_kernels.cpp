#include <benchmark/benchmark.h>

#include <numeric>

#include "zetares/kernels.hpp"
#include "zetares/resonator.hpp"

namespace {

const zr::DirichletSeries& series_1e4() {
  static const zr::DirichletSeries s = zr::zeta_series(0.75, 10000);
  return s;
}

template <bool Parallel>
void BM_DirichletGrid(benchmark::State& state) {
  const auto& s = series_1e4();
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto z = Parallel ? zr::parallel::dirichlet_grid(s, 100.0, 0.05, count) : zr::serial::dirichlet_grid(s, 100.0, 0.05, count);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count * s.amp.size()));
}

template <bool Parallel>
void BM_DirichletPoints(benchmark::State& state) {
  const auto& s = series_1e4();
  std::vector<double> ts(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = 100.0 + 7.31 * static_cast<double>(i);
  for (auto _ : state) {
    auto z = Parallel ? zr::parallel::dirichlet_points(s, ts) : zr::serial::dirichlet_points(s, ts);
    benchmark::DoNotOptimize(z.data());
  }
}

template <bool Parallel>
void BM_GcdDoubleSum(benchmark::State& state) {
  const zr::MultiplicativeSet B = zr::build_B(static_cast<int>(state.range(0)));
  std::vector<zr::u128> v;
  for (const auto& b : B.elements) v.push_back(b.exact_value);
  for (auto _ : state) {
    const double s = Parallel ? zr::parallel::gcd_double_sum(v, 0.75) : zr::serial::gcd_double_sum(v, 0.75);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size() * v.size()));
}

template <bool Parallel>
void BM_Decomposition(benchmark::State& state) {
  const zr::MultiplicativeSet B = zr::build_B(4);
  const zr::RepresentativeSet D = zr::build_D(B, 250);
  zr::DecompositionProblem p;
  for (const auto& d : D.elements) p.masks.push_back(d.exponents.mask());
  p.mn_limit = static_cast<std::uint64_t>(state.range(0));
  p.alpha = 0.75;
  p.T = 250;
  for (auto _ : state) {
    auto r = Parallel ? zr::parallel::decomposition(p) : zr::serial::decomposition(p);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_Type3Tail(benchmark::State& state) {
  zr::TailProblem p;
  p.limit = static_cast<std::uint64_t>(state.range(0));
  p.alpha = 0.75;
  p.cutoff = 1 / (2 * 30.0Q);
  for (auto _ : state) {
    const zr::TailSums r = Parallel ? zr::parallel::type3_tail(p) : zr::serial::type3_tail(p);
    benchmark::DoNotOptimize(r.upper);
  }
}

}  // namespace

BENCHMARK(BM_DirichletGrid<false>)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirichletGrid<true>)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DirichletPoints<false>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirichletPoints<true>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GcdDoubleSum<false>)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GcdDoubleSum<true>)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Decomposition<false>)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Decomposition<true>)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Type3Tail<false>)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Type3Tail<true>)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
