#pragma once

#include <cstddef>
#include <span>

namespace zr {

// Neumaier's variant of Kahan summation.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  NeumaierSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Tree reduction over fixed-size compensated leaves. The reduction order
// depends only on values.size(), so results are reproducible across runs
// and thread counts.
double pairwise_sum(std::span<const double> values);

}  // namespace zr
