#pragma once

// Extended-precision scalar helpers. `quad` is IEEE binary128 (113-bit
// mantissa, ~34 decimal digits); `u128` holds exact resonator integers.

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace zr {

using quad = __float128;
using u128 = unsigned __int128;

quad log_q(quad x);
quad log1p_q(quad x);
quad exp_q(quad x);
quad pow_q(quad x, quad y);
quad sqrt_q(quad x);
quad floor_q(quad x);
quad fabs_q(quad x);
quad sin_q(quad x);
quad cos_q(quad x);
quad lgamma_q(quad x);

// Decimal rendering with `digits` significant digits ("%.{digits-1}Qe").
std::string to_string_q(quad x, int digits = 34);
quad parse_q(std::string_view text);

std::string to_string_u128(u128 value);
u128 parse_u128(std::string_view text);

mpz_class to_mpz(u128 value);
// Exact when the value fits; throws InvalidArgument otherwise.
u128 to_u128(const mpz_class& value);
quad to_quad(const mpz_class& value);
quad to_quad(u128 value);

u128 gcd_u128(u128 a, u128 b);

// Shortest-round-trip style rendering used in every report: 17 significant
// digits, C locale.
std::string fmt17(double x);

}  // namespace zr
