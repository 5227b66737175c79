#pragma once

// posit32 (n = 32, es = 2) arithmetic using integer operations only.
//
// The kernels in `posit_kernel` are templates over the word type so the same
// source both runs (positflow::Word) and is traced into an operation graph
// (graph::Traced).  The concrete API at the bottom wraps them for
// PositBits.
//
// Value of a positive pattern: (1.f) * 2^sf with sf = 4k + e.  Negative
// patterns are the 2's complement of their magnitude.  0x00000000 is zero,
// 0x80000000 is NaR.

#include <cstdint>
#include <cstdio>
#include <string>
#include <tuple>

#include "positflow/bigfloat.hpp"
#include "positflow/word.hpp"

namespace positflow {

struct PositBits {
  std::uint32_t bits = 0;

  friend constexpr bool operator==(PositBits, PositBits) = default;
};

inline constexpr PositBits kPositZero{0x00000000u};
inline constexpr PositBits kPositNaR{0x80000000u};
inline constexpr PositBits kPositOne{0x40000000u};
inline constexpr PositBits kPositMaxPos{0x7FFFFFFFu};
inline constexpr PositBits kPositMinPos{0x00000001u};
inline constexpr int kPositMaxScale = 120;

enum class PositState : int { NaR = -1, Zero = 0, Normal = 1 };

// Unpacked posit.  `fraction` holds the fraction bits left-aligned in a
// 32-bit word without the implicit 1.
struct DecodedNumber {
  int sign = 0;
  std::int32_t sf = 0;
  std::uint32_t fraction = 0;
  PositState state = PositState::Zero;

  friend constexpr bool operator==(const DecodedNumber&, const DecodedNumber&) = default;
};

inline std::string to_hex(PositBits p) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", p.bits);
  return buf;
}

namespace posit_kernel {

inline constexpr std::uint64_t kMask32 = 0xFFFFFFFFull;
inline constexpr std::uint64_t kNaR = 0x80000000ull;

// state: 0 zero, 1 normal, all-ones (-1) NaR.
template <class W>
struct Unpacked {
  W sign;
  W sf;
  W fraction;
  W state;
};

template <class W>
Unpacked<W> decode(W posit, bool fastmath) {
  const W sign = (posit >> 31) & 1;
  // Negative posits decode as their 2's complement magnitude.
  const W magnitude = when(sign, [&] { return (-posit) & kMask32; }, [&] { return posit; });
  const W regime_bit = (magnitude >> 30) & 1;
  // Bits after the sign, moved to the top of the word.
  W temp = magnitude << 33;
  // Count leading 1s or 0s.
  const W run = when(regime_bit, [&] { return clz(~temp); }, [&] { return clz(temp); });
  temp = temp << (run + 1);
  const W k = when(regime_bit, [&] { return run - 1; }, [&] { return -run; });
  const W exponent = temp >> 62;
  const W fraction = (temp << 2) >> 32;
  const W sf = (k << 2) + exponent;

  Unpacked<W> out{sign, sf, fraction, W(1)};
  const auto special = [](W s) { return std::tuple{s, W(0), W(0)}; };
  const W is_zero = eq(posit, W(0));
  auto [s1, sf1, f1] = when(is_zero, [&] { return special(W(0)); },
                            [&] { return std::tuple{out.sign, out.sf, out.fraction}; });
  W state = select(is_zero, W(0), W(1));
  out = Unpacked<W>{s1, sf1, f1, state};
  if (!fastmath) {
    const W is_nar = eq(posit, W(kNaR));
    auto [s2, sf2, f2] = when(is_nar, [&] { return special(W(1)); },
                              [&] { return std::tuple{out.sign, out.sf, out.fraction}; });
    out = Unpacked<W>{s2, sf2, f2, select(is_nar, W(~std::uint64_t{0}), out.state)};
  }
  return out;
}

// Rounds and packs sign * 1.xxx * 2^sf.  `significand` has its leading 1 at
// bit 63; anything nonzero below the retained bits acts as sticky.  Scales
// outside [-120, 120] saturate to minPos / maxPos.  Rounding is
// nearest-even on the encoded bit string, as posit rounding is defined.
template <class W>
W encode(W sign, W sf, W significand) {
  const W scale = smin(smax(sf, W(-kPositMaxScale)), W(kPositMaxScale));
  const W k = sar(scale, W(2));
  const W exponent = scale & 3;

  // Exponent bits then fraction, top-aligned; the two fraction bits that
  // fall off the bottom fold into the lowest bit as sticky.
  const W tail = (exponent << 62) | ((significand << 1) >> 2) | ne(significand & 3, W(0));

  // Regime: k >= 0 is (k + 1) ones and a 0; k < 0 is -k zeros and a 1.
  auto [regime, length] = when(
      slt(k, W(0)),
      [&] {
        const W run = -k;
        return std::tuple{W(1) << (W(63) - run), run + 1};
      },
      [&] { return std::tuple{(~W(0)) << (W(63) - k), k + 2}; });

  const W body64 = regime | (tail >> length);
  const W lost = ne(tail << (W(64) - length), W(0));
  W body = body64 >> 33;
  const W guard = (body64 >> 32) & 1;
  const W sticky = ne(body64 & kMask32, W(0)) | lost;
  body = body + (guard & (sticky | (body & 1)));

  return when(sign, [&] { return (-body) & kMask32; }, [&] { return body; });
}

template <class W>
W add(W a, W b, bool fastmath) {
  const Unpacked<W> x = decode(a, fastmath);
  const Unpacked<W> y = decode(b, fastmath);

  // Order by magnitude so the larger operand keeps its scale and a
  // cancelling subtraction never goes negative.
  const W swap = slt(x.sf, y.sf) | (eq(x.sf, y.sf) & ult(x.fraction, y.fraction));
  auto [big_sign, big_sf, big_frac, small_sf, small_frac] = when(
      swap, [&] { return std::tuple{y.sign, y.sf, y.fraction, x.sf, x.fraction}; },
      [&] { return std::tuple{x.sign, x.sf, x.fraction, y.sf, y.fraction}; });
  const W small_sign = x.sign ^ y.sign ^ big_sign;

  // Implicit bit at 62, leaving bit 63 for the carry.
  const W big_sig = (W(1) << 62) | (big_frac << 30);
  const W small_sig = (W(1) << 62) | (small_frac << 30);
  const W shift = big_sf - small_sf;
  W aligned = small_sig >> shift;
  aligned = aligned | ne(aligned << shift, small_sig);

  const W sum = when(eq(big_sign, small_sign), [&] { return big_sig + aligned; },
                     [&] { return big_sig - aligned; });
  const W lead = clz(sum);
  const W normalized = sum << lead;
  const W sf = big_sf + 1 - lead;

  W result = encode(big_sign, sf, normalized);
  result = select(eq(sum, W(0)), W(0), result);

  // One number is zero.
  result = select(eq(y.state, W(0)), a, result);
  result = select(eq(x.state, W(0)), b, result);
  if (!fastmath) {
    // Output is NaR.
    const W nar = eq(x.state, W(~std::uint64_t{0})) | eq(y.state, W(~std::uint64_t{0}));
    result = select(nar, W(kNaR), result);
  }
  return result;
}

template <class W>
W negate(W p) {
  return (-p) & kMask32;
}

template <class W>
W sub(W a, W b, bool fastmath) {
  return add(a, negate(b), fastmath);
}

template <class W>
W mul(W a, W b, bool fastmath) {
  const Unpacked<W> x = decode(a, fastmath);
  const Unpacked<W> y = decode(b, fastmath);

  W sf = x.sf + y.sf;
  const W sign = x.sign ^ y.sign;
  const W frac_a = (W(1) << 31) | (x.fraction >> 1);
  const W frac_b = (W(1) << 31) | (y.fraction >> 1);
  const W product = frac_a * frac_b;  // in [2^62, 2^64)
  const W carry = product >> 63;
  sf = sf + carry;
  const W normalized = when(carry, [&] { return product; }, [&] { return product << 1; });

  W result = encode(sign, sf, normalized);
  // Test for zero.
  result = select(eq(x.state, W(0)) | eq(y.state, W(0)), W(0), result);
  if (!fastmath) {
    // Test for NaR; it takes precedence over zero.
    const W nar = eq(x.state, W(~std::uint64_t{0})) | eq(y.state, W(~std::uint64_t{0}));
    result = select(nar, W(kNaR), result);
  }
  return result;
}

}  // namespace posit_kernel

// Concrete API ---------------------------------------------------------------

inline DecodedNumber posit_decode(PositBits p) {
  const auto u = posit_kernel::decode(Word(p.bits), false);
  DecodedNumber d;
  d.sign = static_cast<int>(u.sign.v);
  d.sf = static_cast<std::int32_t>(as_signed(u.sf));
  d.fraction = static_cast<std::uint32_t>(u.fraction.v);
  d.state = static_cast<PositState>(static_cast<int>(as_signed(u.state)));
  return d;
}

// Exact encode of a decoded number (fraction taken as exact, no sticky).
inline PositBits posit_encode(const DecodedNumber& d) {
  if (d.state == PositState::Zero) return kPositZero;
  if (d.state == PositState::NaR) return kPositNaR;
  const Word sig = (Word(1) << 63) | (Word(d.fraction) << 31);
  return PositBits{static_cast<std::uint32_t>(
      posit_kernel::encode(Word(d.sign ? 1u : 0u), Word(static_cast<std::uint64_t>(d.sf)), sig).v)};
}

inline PositBits posit_negate(PositBits p) {
  return PositBits{static_cast<std::uint32_t>(posit_kernel::negate(Word(p.bits)).v)};
}

inline PositBits posit_add(PositBits a, PositBits b, bool fastmath = false) {
  return PositBits{static_cast<std::uint32_t>(posit_kernel::add(Word(a.bits), Word(b.bits), fastmath).v)};
}

inline PositBits posit_sub(PositBits a, PositBits b, bool fastmath = false) {
  return PositBits{static_cast<std::uint32_t>(posit_kernel::sub(Word(a.bits), Word(b.bits), fastmath).v)};
}

inline PositBits posit_mul(PositBits a, PositBits b, bool fastmath = false) {
  return PositBits{static_cast<std::uint32_t>(posit_kernel::mul(Word(a.bits), Word(b.bits), fastmath).v)};
}

// Exact value of a posit.  NaR maps to NaN.
inline BigFloat posit_to_real(PositBits p, long precision = 64) {
  const DecodedNumber d = posit_decode(p);
  if (d.state == PositState::Zero) return BigFloat(precision);
  if (d.state == PositState::NaR) return BigFloat::nan(precision);
  const std::uint64_t mant = (std::uint64_t{1} << 32) | d.fraction;
  BigFloat v = BigFloat::from_scaled(mant, static_cast<long>(d.sf) - 32, precision);
  return d.sign ? -v : v;
}

// Nearest posit (ties to even on the encoding), saturating at minPos/maxPos.
inline PositBits posit_from_real(const BigFloat& v) {
  if (v.is_nan()) return kPositNaR;
  if (v.is_zero()) return kPositZero;
  const long e = v.binary_exponent();
  // Truncate |v| to 64 significant bits; an inexact truncation becomes sticky.
  BigFloat top(64);
  const int inexact = mpfr_set(top.get(), v.get(), MPFR_RNDZ);
  mpfr_abs(top.get(), top.get(), MPFR_RNDN);
  mpfr_mul_2si(top.get(), top.get(), 63 - e, MPFR_RNDN);
  std::uint64_t sig = mpfr_get_uj(top.get(), MPFR_RNDZ);
  if (inexact != 0) sig |= 1;
  const long clamped = std::clamp<long>(e, -4 * kPositMaxScale, 4 * kPositMaxScale);
  return PositBits{static_cast<std::uint32_t>(
      posit_kernel::encode(Word(v.is_negative() ? 1u : 0u), Word(static_cast<std::uint64_t>(clamped)),
                           Word(sig))
          .v)};
}

}  // namespace positflow
