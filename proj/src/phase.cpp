#include "zetares/phase.hpp"

#include <cmath>

namespace zr {

namespace {

// 2*pi split into three doubles.
constexpr double kTwoPiHi = 6.283185307179586232e+00;
constexpr double kTwoPiMid = 2.449293598294706414e-16;
constexpr double kTwoPiLo = -5.989539619436679332e-33;
constexpr double kInvTwoPi = 0.15915494309189533577;

}  // namespace

DD to_dd(quad x) {
  DD d;
  d.hi = static_cast<double>(x);
  d.lo = static_cast<double>(x - static_cast<quad>(d.hi));
  return d;
}

DD log_dd(std::uint64_t n) { return to_dd(log_q(static_cast<quad>(n))); }

double reduce_phase(double t, DD f) {
  // t*f as p + e, exact up to the t*f.lo rounding.
  const double p = t * f.hi;
  const double e = std::fma(t, f.hi, -p) + t * f.lo;
  const double k = std::nearbyint(p * kInvTwoPi);
  // k*2pi_hi as an exact pair; p and its head cancel exactly.
  const double kh = k * kTwoPiHi;
  const double kl = std::fma(k, kTwoPiHi, -kh);
  double r = p - kh;
  r += (e - kl) - k * kTwoPiMid - k * kTwoPiLo;
  return r;
}

std::complex<double> phasor(double t, DD f) {
  const double r = reduce_phase(t, f);
  return {std::cos(r), -std::sin(r)};
}

DirichletSeries zeta_series(double alpha, std::uint64_t N) {
  DirichletSeries s;
  s.amp.resize(N);
  s.freq.resize(N);
  const quad a = alpha;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const quad l = log_q(static_cast<quad>(n));
    s.amp[n - 1] = static_cast<double>(exp_q(-a * l));
    s.freq[n - 1] = to_dd(l);
  }
  return s;
}

DirichletSeries unit_series(std::span<const quad> logs) {
  DirichletSeries s;
  s.amp.assign(logs.size(), 1.0);
  s.freq.reserve(logs.size());
  for (const quad l : logs) s.freq.push_back(to_dd(l));
  return s;
}

}  // namespace zr
