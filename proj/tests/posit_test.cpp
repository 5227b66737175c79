#include <gtest/gtest.h>

#include <cstdint>

#include "positflow/oracle.hpp"
#include "positflow/posit.hpp"
#include "positflow/rng.hpp"
#include "positflow/softfloat.hpp"

namespace positflow {
namespace {

PositBits P(double v) { return posit_from_real(BigFloat(v, 64)); }

bool is_special(std::uint32_t b) { return b == 0 || b == 0x80000000u; }

TEST(PositDecode, SpecialStates) {
  EXPECT_EQ(posit_decode(kPositZero).state, PositState::Zero);
  const DecodedNumber nar = posit_decode(kPositNaR);
  EXPECT_EQ(nar.state, PositState::NaR);
  EXPECT_EQ(nar.sign, 1);
  EXPECT_EQ(nar.sf, 0);
  EXPECT_EQ(nar.fraction, 0u);
}

TEST(PositDecode, One) {
  const DecodedNumber d = posit_decode(PositBits{0x40000000u});
  EXPECT_EQ(d.state, PositState::Normal);
  EXPECT_EQ(d.sign, 0);
  EXPECT_EQ(d.sf, 0);
  EXPECT_EQ(d.fraction, 0u);
}

TEST(PositDecode, ExtremesAndNegatives) {
  EXPECT_EQ(posit_decode(kPositMaxPos).sf, 120);
  EXPECT_EQ(posit_decode(kPositMinPos).sf, -120);
  // -1.0 is the 2's complement of 0x40000000.
  const DecodedNumber m = posit_decode(PositBits{0xC0000000u});
  EXPECT_EQ(m.sign, 1);
  EXPECT_EQ(m.sf, 0);
  EXPECT_EQ(m.fraction, 0u);
  // 1.5 * 2^5: regime 110 (k = 1), exponent 01, fraction 1000...
  const DecodedNumber d = posit_decode(PositBits{0b0'110'01'1u << 25});
  EXPECT_EQ(d.sf, 5);
  EXPECT_EQ(d.fraction, 0x80000000u);
}

TEST(PositDecode, MatchesFieldReaderOnRandomPatterns) {
  SplitMix64 rng(7);
  for (int i = 0; i < 1'000'000; ++i) {
    const auto bits = static_cast<std::uint32_t>(rng.next());
    const auto expected = oracle::posit_value(bits, 32);
    if (!expected) {
      ASSERT_EQ(bits, 0x80000000u);
      continue;
    }
    ASSERT_EQ(posit_to_real(PositBits{bits}), *expected) << std::hex << bits;
  }
}

TEST(PositEncode, Examples) {
  EXPECT_EQ(posit_encode({0, 0, 0, PositState::Normal}), PositBits{0x40000000u});
  EXPECT_EQ(posit_encode({0, 121, 0xDEADBEEFu, PositState::Normal}), kPositMaxPos);
  EXPECT_EQ(posit_encode({0, -121, 0, PositState::Normal}), kPositMinPos);
  EXPECT_EQ(posit_encode({1, -500, 0, PositState::Normal}), posit_negate(kPositMinPos));
  EXPECT_EQ(posit_encode({0, 0, 0, PositState::Zero}), kPositZero);
  EXPECT_EQ(posit_encode({1, 0, 0, PositState::NaR}), kPositNaR);
}

TEST(PositEncode, RoundTripAcrossRegimesAndFractionBoundaries) {
  // Every scale, with the smallest, largest and an alternating fraction that
  // fits the available bits.
  for (int sf = -120; sf <= 120; ++sf) {
    for (std::uint32_t fraction : {0u, 0xFFFFFFFFu, 0xAAAAAAAAu, 0x80000000u}) {
      for (int sign = 0; sign < 2; ++sign) {
        const PositBits p = posit_encode({sign, sf, fraction, PositState::Normal});
        ASSERT_EQ(posit_encode(posit_decode(p)), p) << sf;
      }
    }
  }
}

TEST(PositEncode, RoundTripRandomPatterns) {
  SplitMix64 rng(11);
  for (int i = 0; i < 2'000'000; ++i) {
    const auto bits = static_cast<std::uint32_t>(rng.next());
    if (is_special(bits)) continue;
    ASSERT_EQ(posit_encode(posit_decode(PositBits{bits})).bits, bits);
  }
}

TEST(PositAdd, Examples) {
  EXPECT_EQ(posit_add(P(1.0), kPositZero), P(1.0));
  EXPECT_EQ(posit_add(kPositZero, P(-2.5)), P(-2.5));
  EXPECT_EQ(posit_add(kPositNaR, P(3.5)), kPositNaR);
  EXPECT_EQ(posit_add(P(1.0), P(1.0)), P(2.0));
  EXPECT_EQ(posit_add(P(1.0), P(-1.0)), kPositZero);
  EXPECT_EQ(posit_add(kPositMaxPos, kPositMaxPos), kPositMaxPos);
  EXPECT_EQ(posit_add(kPositMinPos, posit_negate(kPositMinPos)), kPositZero);
}

TEST(PositSub, Examples) {
  EXPECT_EQ(posit_sub(P(1.0), P(1.0)), kPositZero);
  const PositBits x = P(0.375);
  EXPECT_EQ(posit_sub(kPositZero, x).bits, static_cast<std::uint32_t>(-x.bits));
  EXPECT_EQ(posit_sub(P(5.0), P(3.0)), P(2.0));
  EXPECT_EQ(posit_negate(kPositNaR), kPositNaR);
  EXPECT_EQ(posit_negate(kPositZero), kPositZero);
}

TEST(PositMul, Examples) {
  EXPECT_EQ(posit_mul(P(2.0), P(3.0)), P(6.0));
  EXPECT_EQ(posit_mul(P(-2.0), P(3.0)), P(-6.0));
  EXPECT_EQ(posit_mul(kPositNaR, kPositZero), kPositNaR);
  EXPECT_EQ(posit_mul(kPositZero, P(7.0)), kPositZero);
  EXPECT_EQ(posit_mul(kPositMaxPos, kPositMaxPos), kPositMaxPos);
  EXPECT_EQ(posit_mul(kPositMinPos, kPositMinPos), kPositMinPos);
}

TEST(PositFastMath, NaRBranchesOnlyMatterForNaR) {
  SplitMix64 rng(3);
  for (int i = 0; i < 100'000; ++i) {
    const PositBits a{static_cast<std::uint32_t>(rng.next())};
    const PositBits b{static_cast<std::uint32_t>(rng.next())};
    if (a == kPositNaR || b == kPositNaR) continue;
    ASSERT_EQ(posit_add(a, b, true), posit_add(a, b, false));
    ASSERT_EQ(posit_mul(a, b, true), posit_mul(a, b, false));
  }
}

class PositRounding : public ::testing::Test {
 protected:
  static constexpr long kExact = 512;

  static PositBits oracle_round(const BigFloat& v) { return PositBits{oracle::round_to_posit32(v)}; }
};

TEST_F(PositRounding, ArithmeticIsCorrectlyRounded) {
  SplitMix64 rng(2024);
  for (int i = 0; i < 20'000; ++i) {
    const PositBits a{static_cast<std::uint32_t>(rng.next())};
    PositBits b{static_cast<std::uint32_t>(rng.next())};
    // Every fourth pair sits close to -a to exercise cancellation.
    if (i % 4 == 0) b = PositBits{static_cast<std::uint32_t>(-a.bits + (rng.next() % 64) - 32)};
    if (a == kPositNaR || b == kPositNaR) continue;
    const BigFloat x = posit_to_real(a);
    const BigFloat y = posit_to_real(b);
    ASSERT_EQ(posit_add(a, b), oracle_round(big_add(x, y, kExact))) << to_hex(a) << " + " << to_hex(b);
    ASSERT_EQ(posit_sub(a, b), oracle_round(big_sub(x, y, kExact))) << to_hex(a) << " - " << to_hex(b);
    ASSERT_EQ(posit_mul(a, b), oracle_round(big_mul(x, y, kExact))) << to_hex(a) << " * " << to_hex(b);
  }
}

TEST_F(PositRounding, FromRealNearOne) {
  // 27 fraction bits next to 1.0: 2^-30 rounds away, 2^-28 + 2^-30 rounds up.
  const BigFloat one(1.0, 128);
  EXPECT_EQ(posit_from_real(big_add(one, BigFloat::exp2(-30, 64), 128)), kPositOne);
  EXPECT_EQ(posit_from_real(big_add(one, BigFloat::exp2(-27, 64), 128)), PositBits{0x40000001u});
  const BigFloat above_half = big_add(BigFloat::exp2(-28, 64), BigFloat::exp2(-30, 64), 128);
  EXPECT_EQ(posit_from_real(big_add(one, above_half, 128)), PositBits{0x40000001u});
  // Exact tie goes to the even pattern.
  EXPECT_EQ(posit_from_real(big_add(one, BigFloat::exp2(-28, 64), 128)), kPositOne);
}

TEST_F(PositRounding, FromRealMatchesOracle) {
  SplitMix64 rng(5);
  for (int i = 0; i < 20'000; ++i) {
    // Random significand and scale across and beyond the posit range.
    const auto mant = rng.next() | 1;
    const long e = static_cast<long>(rng.next() % 300) - 150 - 63;
    BigFloat v = BigFloat::from_scaled(mant, e, 64);
    if (rng.next() & 1) v = -v;
    ASSERT_EQ(posit_from_real(v), oracle_round(v)) << v.to_hex();
  }
}

TEST_F(PositRounding, EncodingMidpointsNearMinPos) {
  // Between minPos = 2^-120 and 2^-116 the exponent bits are cut off, so the
  // rounding boundary is 2^-118, not the arithmetic midpoint.
  EXPECT_EQ(posit_from_real(BigFloat::exp2(-119, 64)), kPositMinPos);
  EXPECT_EQ(posit_from_real(BigFloat::exp2(-118, 64)), PositBits{2});
  EXPECT_EQ(posit_from_real(BigFloat::exp2(-117, 64)), PositBits{2});
  EXPECT_EQ(posit_from_real(BigFloat::exp2(-400, 64)), kPositMinPos);
  EXPECT_EQ(posit_from_real(-BigFloat::exp2(400, 64)), posit_negate(kPositMaxPos));
}

TEST(PositReal, Extremes) {
  EXPECT_EQ(posit_to_real(kPositMaxPos), BigFloat::exp2(120, 64));
  EXPECT_EQ(posit_to_real(kPositMinPos), BigFloat::exp2(-120, 64));
  EXPECT_TRUE(posit_to_real(kPositNaR).is_nan());
  EXPECT_EQ(posit_from_real(BigFloat::nan(64)), kPositNaR);
}

TEST(PositProperties, NegationSymmetryAndCommutativity) {
  SplitMix64 rng(99);
  for (int i = 0; i < 200'000; ++i) {
    const PositBits a{static_cast<std::uint32_t>(rng.next())};
    const PositBits b{static_cast<std::uint32_t>(rng.next())};
    if (a == kPositNaR || b == kPositNaR) continue;
    ASSERT_EQ(posit_add(a, b), posit_negate(posit_add(posit_negate(a), posit_negate(b))));
    ASSERT_EQ(posit_add(a, b), posit_add(b, a));
    ASSERT_EQ(posit_mul(a, b), posit_mul(b, a));
  }
}

TEST(PositProperties, AtLeastFloat32AccuracyBetweenTwoToMinusTwentyAndTwenty) {
  SplitMix64 rng(123);
  for (int i = 0; i < 50'000; ++i) {
    const long e = static_cast<long>(rng.next() % 40) - 20;
    const BigFloat x = BigFloat::from_scaled(rng.next() | (std::uint64_t{1} << 63), e - 63, 64);
    const BigFloat posit_err = big_sub(posit_to_real(posit_from_real(x)), x, 128).abs();
    const BigFloat float_err = big_sub(sf32_to_real(sf32_from_real(x)), x, 128).abs();
    ASSERT_LE(posit_err, float_err) << x.to_hex();
  }
}

}  // namespace
}  // namespace positflow
