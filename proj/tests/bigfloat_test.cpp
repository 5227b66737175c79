#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "positflow/bigfloat.hpp"
#include "positflow/rng.hpp"

namespace positflow {
namespace {

constexpr long P = kReferencePrecision;

// |a - b| <= 2^e
bool within(const BigFloat& a, const BigFloat& b, long e) {
  return big_sub(a, b, P + 64).abs() <= BigFloat::exp2(e, 64);
}

TEST(BigFloat, KeepsBitsFarBelowDoublePrecision) {
  const BigFloat one(1.0, P);
  const BigFloat x = big_add(one, BigFloat::exp2(-200, P), P);
  EXPECT_NE(x, one);
  EXPECT_EQ(big_sub(x, one, P), BigFloat::exp2(-200, P));
  // 2^-300 is below the last bit of a 250-bit 1.0 and rounds away.
  EXPECT_EQ(big_add(one, BigFloat::exp2(-300, P), P), one);
}

TEST(BigFloat, AgreesWithLongDoubleAtSixtyFourBits) {
  SplitMix64 rng(17);
  for (int i = 0; i < 100'000; ++i) {
    const long double a = static_cast<long double>(rng.uniform(-1e3, 1e3)) * rng.uniform01();
    const long double b = static_cast<long double>(rng.uniform(-1e3, 1e3)) / 3.0L;
    BigFloat x(64);
    BigFloat y(64);
    mpfr_set_ld(x.get(), a, MPFR_RNDN);
    mpfr_set_ld(y.get(), b, MPFR_RNDN);
    ASSERT_EQ(big_add(x, y, 64).to_long_double(), a + b);
    ASSERT_EQ(big_sub(x, y, 64).to_long_double(), a - b);
    ASSERT_EQ(big_mul(x, y, 64).to_long_double(), a * b);
    ASSERT_EQ(big_div(x, y, 64).to_long_double(), a / b);
  }
}

TEST(BigFloat, PythagoreanIdentity) {
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const BigFloat t(rng.uniform(-10.0, 10.0), P);
    const BigFloat s = big_sin(t, P);
    const BigFloat c = big_cos(t, P);
    ASSERT_TRUE(within(big_add(big_mul(s, s, P), big_mul(c, c, P), P), BigFloat(1.0, P), -245));
  }
}

TEST(BigFloat, KnownConstants) {
  const BigFloat one(1.0, P);
  const BigFloat sin1 = BigFloat::parse("0.84147098480789650665250232163029899962256306079837106567275170999191040439123966894863974354305269585434903790792067429325911892099189888119341032772921240948079", P);
  const BigFloat cos1 = BigFloat::parse("0.54030230586813971740093660744297660373231042061792222767009725538110039477447176451795185608718308934357173116791145114211870182006205434503930624051018939296098", P);
  EXPECT_TRUE(within(big_sin(one, P), sin1, -250));
  EXPECT_TRUE(within(big_cos(one, P), cos1, -250));
}

TEST(BigFloat, StoredPiMatchesLibrary) {
  for (long p : {53L, 128L, 250L, 512L, 992L}) {
    BigFloat lib(p);
    mpfr_const_pi(lib.get(), MPFR_RNDN);
    EXPECT_EQ(big_pi(p), lib) << p;
  }
  EXPECT_THROW(big_pi(2000), std::invalid_argument);
}

TEST(BigFloat, TurnFractionSymmetry) {
  // sin(2 pi k / n) at quarter turns is exact; cos(pi / 4)^2 = 1/2.
  EXPECT_TRUE(within(big_sin(big_turn_fraction(1, 4, P), P), BigFloat(1.0, P), -P));
  const BigFloat c = big_cos(big_turn_fraction(1, 8, P), P);
  EXPECT_TRUE(within(big_mul(c, c, P), BigFloat(0.5, P), -248));
}

TEST(BigFloat, ErrorShrinksWithPrecision) {
  // 1/3 rounded at P bits is off by about 2^-P.
  const BigFloat exact = big_div(BigFloat(1.0, 1024), BigFloat(3.0, 1024), 1024);
  BigFloat previous = BigFloat(1.0, 64);
  for (long p : {64L, 128L, 250L, 512L}) {
    const BigFloat third = big_div(BigFloat(1.0, p), BigFloat(3.0, p), p);
    const BigFloat err = big_sub(third, exact, 1024).abs();
    EXPECT_LT(err, previous) << p;
    EXPECT_LE(err, BigFloat::exp2(-p, 64)) << p;
    previous = err;
  }
}

TEST(BigFloat, ReroundingMatchesDirectExceptForDoubleRounding) {
  // Rounding a P-bit result to P' bits agrees with computing at P' directly,
  // unless the P-bit result landed exactly on a P'-bit midpoint.
  SplitMix64 rng(21);
  const long hi = 120;
  const long lo = 53;
  int double_roundings = 0;
  for (int i = 0; i < 100'000; ++i) {
    const BigFloat a = BigFloat::from_scaled(rng.next() | 1, -64, 64);
    const BigFloat b = BigFloat::from_scaled(rng.next() | 1, -static_cast<long>(rng.next() % 100) - 64, 64);
    for (int op = 0; op < 2; ++op) {
      const BigFloat wide = op == 0 ? big_add(a, b, hi) : big_mul(a, b, hi);
      const BigFloat direct = op == 0 ? big_add(a, b, lo) : big_mul(a, b, lo);
      if (wide.rounded(lo) == direct) continue;
      // A midpoint at P' bits needs only P' + 1 significant bits.
      ASSERT_EQ(wide.rounded(lo + 1), wide) << wide.to_hex();
      ++double_roundings;
    }
  }
  EXPECT_LT(double_roundings, 100);
}

TEST(BigFloat, DivisionByZeroThrows) {
  EXPECT_THROW(big_div(BigFloat(1.0, P), BigFloat(P), P), std::domain_error);
}

TEST(BigFloat, ParseAndPrint) {
  EXPECT_EQ(BigFloat::parse("0x1.8p+1", 64), BigFloat(3.0, 64));
  EXPECT_EQ(BigFloat::parse("-0.25", 64), BigFloat(-0.25, 64));
  EXPECT_THROW(BigFloat::parse("1.2.3", 64), std::invalid_argument);
  EXPECT_EQ(BigFloat::parse(BigFloat(0.1, 64).to_hex(), 64), BigFloat(0.1, 64));
}

TEST(BigFloat, MoveAndCopyKeepValues) {
  BigFloat a(2.5, 100);
  BigFloat b = a;
  BigFloat c = std::move(a);
  EXPECT_EQ(b, c);
  EXPECT_EQ(c.precision(), 100);
  a = b;
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace positflow
