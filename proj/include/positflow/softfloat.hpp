#pragma once

// Normals-only IEEE-754 binary32 add / sub / mul built from integer
// operations, with the same kernel-over-word structure as posit.hpp.
//
// Inputs are normal numbers or +-0.  Results are rounded to nearest-even;
// results below the smallest normal flush to a signed zero and results past
// the largest normal saturate to +-0x7F7FFFFF.  No Inf, NaN or subnormal is
// ever produced.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>
#include <tuple>

#include "positflow/bigfloat.hpp"
#include "positflow/word.hpp"

namespace positflow {

struct FloatBits {
  std::uint32_t bits = 0;

  friend constexpr bool operator==(FloatBits, FloatBits) = default;
};

inline constexpr FloatBits kFloatMaxNormal{0x7F7FFFFFu};
inline constexpr FloatBits kFloatMinNormal{0x00800000u};

inline std::string to_hex(FloatBits f) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", f.bits);
  return buf;
}

inline FloatBits float_bits(float f) { return FloatBits{std::bit_cast<std::uint32_t>(f)}; }
inline float native_float(FloatBits f) { return std::bit_cast<float>(f.bits); }

namespace float_kernel {

// Packs sign * 1.xxx * 2^(exponent - 127).  `significand` has its leading 1
// at bit 63; bits below the 24 retained ones are guard + sticky.
// `exponent` is a signed biased exponent.
template <class W>
W round_pack(W sign, W exponent, W significand) {
  W mant = significand >> 40;
  const W guard = (significand >> 39) & 1;
  const W sticky = ne(significand << 25, W(0));
  mant = mant + (guard & (sticky | (mant & 1)));
  // Rounding can carry into bit 24.
  const W carry = mant >> 24;
  mant = mant >> carry;
  const W biased = exponent + carry;

  W result = (sign << 31) | (biased << 23) | (mant & 0x7FFFFF);
  result = select(slt(W(254), biased), (sign << 31) | 0x7F7FFFFF, result);
  result = select(slt(biased, W(1)), sign << 31, result);
  return result;
}

template <class W>
W add(W a, W b) {
  // Order by magnitude; the bit patterns of normals sort like their values.
  const W swap = ult(a & 0x7FFFFFFF, b & 0x7FFFFFFF);
  const W big = select(swap, b, a);
  const W small = select(swap, a, b);

  const W big_sign = big >> 31;
  const W small_sign = small >> 31;
  const W big_exp = (big >> 23) & 0xFF;
  const W small_exp = (small >> 23) & 0xFF;
  // A zero exponent field is read as zero.
  const W big_sig = select(eq(big_exp, W(0)), W(0), ((big & 0x7FFFFF) | 0x800000) << 39);
  const W small_sig = select(eq(small_exp, W(0)), W(0), ((small & 0x7FFFFF) | 0x800000) << 39);

  const W shift = big_exp - small_exp;
  W aligned = small_sig >> shift;
  aligned = aligned | ne(aligned << shift, small_sig);

  const W sum = when(eq(big_sign, small_sign), [&] { return big_sig + aligned; },
                     [&] { return big_sig - aligned; });
  const W lead = clz(sum);
  const W result = round_pack(big_sign, big_exp + 1 - lead, sum << lead);
  return select(eq(sum, W(0)), W(0), result);
}

template <class W>
W sub(W a, W b) {
  return add(a, b ^ 0x80000000);
}

template <class W>
W mul(W a, W b) {
  const W sign = (a ^ b) >> 31;
  const W exp_a = (a >> 23) & 0xFF;
  const W exp_b = (b >> 23) & 0xFF;
  const W product = ((a & 0x7FFFFF) | 0x800000) * ((b & 0x7FFFFF) | 0x800000);  // [2^46, 2^48)
  const W carry = product >> 47;
  const W result = round_pack(sign, exp_a + exp_b - 127 + carry, product << (W(17) - carry));
  return select(eq(exp_a, W(0)) | eq(exp_b, W(0)), sign << 31, result);
}

}  // namespace float_kernel

inline FloatBits sf32_add(FloatBits a, FloatBits b) {
  return FloatBits{static_cast<std::uint32_t>(float_kernel::add(Word(a.bits), Word(b.bits)).v)};
}

inline FloatBits sf32_sub(FloatBits a, FloatBits b) {
  return FloatBits{static_cast<std::uint32_t>(float_kernel::sub(Word(a.bits), Word(b.bits)).v)};
}

inline FloatBits sf32_mul(FloatBits a, FloatBits b) {
  return FloatBits{static_cast<std::uint32_t>(float_kernel::mul(Word(a.bits), Word(b.bits)).v)};
}

inline BigFloat sf32_to_real(FloatBits f, long precision = 64) {
  const std::uint32_t exp = (f.bits >> 23) & 0xFF;
  if (exp == 0) return BigFloat(precision);
  const std::uint64_t mant = (f.bits & 0x7FFFFFu) | 0x800000u;
  BigFloat v = BigFloat::from_scaled(mant, static_cast<long>(exp) - 127 - 23, precision);
  return (f.bits >> 31) ? -v : v;
}

// Nearest normal float (ties to even), with the same flush / saturate rules
// as the arithmetic.
inline FloatBits sf32_from_real(const BigFloat& v) {
  if (v.is_zero() || v.is_nan()) return FloatBits{0};
  const long e = std::clamp<long>(v.binary_exponent(), -1000, 1000);
  BigFloat top(64);
  const int inexact = mpfr_set(top.get(), v.get(), MPFR_RNDZ);
  mpfr_abs(top.get(), top.get(), MPFR_RNDN);
  mpfr_mul_2si(top.get(), top.get(), 63 - e, MPFR_RNDN);
  std::uint64_t sig = mpfr_get_uj(top.get(), MPFR_RNDZ);
  if (inexact != 0) sig |= 1;
  const Word packed = float_kernel::round_pack(Word(v.is_negative() ? 1u : 0u),
                                               Word(static_cast<std::uint64_t>(e + 127)), Word(sig));
  return FloatBits{static_cast<std::uint32_t>(packed.v)};
}

}  // namespace positflow
