#include "zetares/summation.hpp"

namespace zr {

namespace {

constexpr std::size_t kLeaf = 64;

double reduce(std::span<const double> v) {
  if (v.size() <= kLeaf) {
    NeumaierSum s;
    for (double x : v) s.add(x);
    return s.value();
  }
  const std::size_t half = v.size() / 2;
  const double a = reduce(v.first(half));
  const double b = reduce(v.subspan(half));
  return a + b;
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return reduce(values); }

}  // namespace zr
