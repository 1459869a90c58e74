#include "zetares/quadrature.hpp"

#include <cmath>

#include "zetares/error.hpp"
#include "zetares/quad.hpp"
#include "zetares/summation.hpp"

namespace zr {

QuadratureResult simpson_adaptive(const GridFunction& f, double a, double b, const QuadratureOptions& options) {
  if (!(b >= a)) throw InvalidArgument("simpson_adaptive: need a <= b, got [" + fmt17(a) + ", " + fmt17(b) + "]");
  if (!(options.max_step > 0)) throw InvalidArgument("simpson_adaptive: max_step must be positive");
  QuadratureResult res;
  if (b == a) {
    res.converged = true;
    return res;
  }
  std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / options.max_step));
  n = std::max<std::size_t>(2, n + (n % 2));
  double h = (b - a) / static_cast<double>(n);

  std::vector<double> v = f(a, h, n + 1);
  res.evaluations = n + 1;
  const double ends = v.front() + v.back();
  std::vector<double> odd, even;
  for (std::size_t j = 1; j < n; ++j) (j % 2 ? odd : even).push_back(v[j]);
  double odd_sum = pairwise_sum(odd);
  double even_sum = pairwise_sum(even);
  double S = h / 3 * (ends + 4 * odd_sum + 2 * even_sum);

  for (int level = 1;; ++level) {
    if (res.evaluations + n > options.max_evaluations) {
      res.value = S;
      res.step = h;
      res.levels = level - 1;
      return res;
    }
    // Midpoints of the current grid become the new odd points.
    std::vector<double> mid = f(a + h / 2, h, n);
    res.evaluations += n;
    even_sum = even_sum + odd_sum;
    odd_sum = pairwise_sum(mid);
    n *= 2;
    h /= 2;
    const double S2 = h / 3 * (ends + 4 * odd_sum + 2 * even_sum);
    const double err = (S2 - S) / 15;
    S = S2;
    res.value = S2 + err;
    res.error_estimate = std::fabs(err);
    res.step = h;
    res.levels = level;
    if (level >= options.min_levels &&
        res.error_estimate <= std::max(options.rtol * std::fabs(res.value), options.atol)) {
      res.converged = true;
      return res;
    }
  }
}

QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options) {
  GridFunction g = [&f](double t0, double h, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = f(t0 + static_cast<double>(j) * h);
    return out;
  };
  return simpson_adaptive(g, a, b, options);
}

}  // namespace zr
