#include "zetares/quad.hpp"

#include <algorithm>
#include <cstdio>
#include <quadmath.h>

#include "zetares/error.hpp"

namespace zr {

quad log_q(quad x) { return logq(x); }
quad log1p_q(quad x) { return log1pq(x); }
quad exp_q(quad x) { return expq(x); }
quad pow_q(quad x, quad y) { return powq(x, y); }
quad sqrt_q(quad x) { return sqrtq(x); }
quad floor_q(quad x) { return floorq(x); }
quad fabs_q(quad x) { return fabsq(x); }
quad sin_q(quad x) { return sinq(x); }
quad cos_q(quad x) { return cosq(x); }
quad lgamma_q(quad x) { return lgammaq(x); }

std::string to_string_q(quad x, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qe", digits - 1, x);
  return buf;
}

quad parse_q(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  const quad v = strtoflt128(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw InvalidArgument("not a decimal number: '" + s + "'");
  }
  return v;
}

std::string to_string_u128(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

u128 parse_u128(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty integer string");
  u128 v = 0;
  const u128 max = ~static_cast<u128>(0);
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw InvalidArgument("not a decimal integer: '" + std::string(text) + "'");
    }
    const unsigned d = static_cast<unsigned>(c - '0');
    if (v > (max - d) / 10) {
      throw InvalidArgument("integer exceeds 128 bits: '" + std::string(text) + "'");
    }
    v = v * 10 + d;
  }
  return v;
}

mpz_class to_mpz(u128 value) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(value >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(value)));
  return (hi << 64) + lo;
}

u128 to_u128(const mpz_class& value) {
  if (value < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 128) {
    throw InvalidArgument("value does not fit in 128 bits");
  }
  const mpz_class mask = (mpz_class(1) << 64) - 1;
  const mpz_class lo = value & mask;
  const mpz_class hi = value >> 64;
  return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

quad to_quad(const mpz_class& value) {
  return parse_q(value.get_str(10));
}

quad to_quad(u128 value) {
  const auto hi = static_cast<std::uint64_t>(value >> 64);
  const auto lo = static_cast<std::uint64_t>(value);
  return static_cast<quad>(hi) * 18446744073709551616.0Q + static_cast<quad>(lo);
}

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    const u128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace zr
