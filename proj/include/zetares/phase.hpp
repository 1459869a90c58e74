#pragma once

// Phases t*f for Dirichlet terms. Frequencies are stored as double-double
// (hi + lo, ~32 digits) and reduced modulo 2*pi before sin/cos, so the
// phase error stays near 1e-16 even when t*log n is 1e8.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "zetares/quad.hpp"

namespace zr {

struct DD {
  double hi = 0;
  double lo = 0;
};

DD to_dd(quad x);
DD log_dd(std::uint64_t n);

// t*f mod 2*pi, in [-pi, pi].
double reduce_phase(double t, DD f);
// exp(-i t f).
std::complex<double> phasor(double t, DD f);

// sum_n amp[n] exp(-i t f[n]).
struct DirichletSeries {
  std::vector<double> amp;
  std::vector<DD> freq;

  std::size_t size() const { return amp.size(); }
};

// n^{-alpha}, n = 1..N.
DirichletSeries zeta_series(double alpha, std::uint64_t N);
// Unit amplitudes at the given frequencies (logs).
DirichletSeries unit_series(std::span<const quad> logs);

}  // namespace zr
