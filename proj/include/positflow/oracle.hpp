#pragma once

// Reference posit semantics used to check the integer kernels.
//
// Nothing here calls into posit_kernel.  Patterns are read bit by bit per the
// field rules (sign, regime run, up to two exponent bits, fraction), and
// rounding is found by bisection over the monotone pattern order, with ties
// decided against the (n+1)-bit posit that sits between two n-bit
// neighbours.

#include <cstdint>
#include <optional>

#include "positflow/bigfloat.hpp"

namespace positflow::oracle {

// Exact value of an n-bit, es = 2 posit (2 <= n <= 64) given in the low n
// bits.  NaR gives std::nullopt.
inline std::optional<BigFloat> posit_value(std::uint64_t bits, int n, long precision = 128) {
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  bits &= mask;
  const std::uint64_t top = std::uint64_t{1} << (n - 1);
  if (bits == 0) return BigFloat(precision);
  if (bits == top) return std::nullopt;
  const bool negative = (bits & top) != 0;
  if (negative) bits = (~bits + 1) & mask;

  int pos = n - 2;
  const auto bit = [&](int i) { return static_cast<int>((bits >> i) & 1); };
  const int regime = bit(pos);
  int run = 0;
  while (pos >= 0 && bit(pos) == regime) {
    ++run;
    --pos;
  }
  --pos;  // terminating bit, if any
  const long k = regime ? run - 1 : -run;

  long e = 0;
  for (int i = 0; i < 2; ++i) {
    e <<= 1;
    if (pos >= 0) e |= bit(pos--);
  }
  std::uint64_t fraction = 0;
  int fraction_bits = 0;
  for (; pos >= 0; --pos) {
    fraction = (fraction << 1) | static_cast<std::uint64_t>(bit(pos));
    ++fraction_bits;
  }
  // (2^fb + f) * 2^(4k + e - fb); fraction_bits <= 59 here.
  const std::uint64_t mant = (std::uint64_t{1} << fraction_bits) | fraction;
  BigFloat v = BigFloat::from_scaled(mant, 4 * k + e - fraction_bits, precision);
  return negative ? -v : v;
}

// Correctly rounded posit32 of a real: nearest on the encoding, ties to an
// even pattern, magnitudes clamped to [minPos, maxPos].
inline std::uint32_t round_to_posit32(const BigFloat& x) {
  if (x.is_nan()) return 0x80000000u;
  if (x.is_zero()) return 0;
  const BigFloat mag = x.abs();
  const auto value = [](std::uint32_t p) { return *posit_value(p, 32); };

  std::uint32_t result = 0;
  if (mag <= value(1)) {
    result = 1;
  } else if (mag >= value(0x7FFFFFFFu)) {
    result = 0x7FFFFFFFu;
  } else {
    // Largest pattern with value <= mag.
    std::uint32_t lo = 1;
    std::uint32_t hi = 0x7FFFFFFFu;
    while (hi - lo > 1) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (value(mid) <= mag) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (value(lo) == mag) {
      result = lo;
    } else {
      const BigFloat midpoint = *posit_value((std::uint64_t{lo} << 1) | 1, 33);
      if (mag < midpoint) {
        result = lo;
      } else if (mag > midpoint) {
        result = hi;
      } else {
        result = (lo & 1) == 0 ? lo : hi;
      }
    }
  }
  return x.is_negative() ? static_cast<std::uint32_t>(-result) : result;
}

}  // namespace positflow::oracle
