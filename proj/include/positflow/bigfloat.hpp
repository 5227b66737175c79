#pragma once

// Arbitrary-precision binary floating point used as the accuracy oracle.
//
// BigFloat owns one MPFR number.  Every value carries its own precision;
// the free functions round their result to an explicitly requested
// precision with round-to-nearest-even.

#include <cstdint>
#include <cstdio>

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace positflow {

inline constexpr long kReferencePrecision = 250;

// pi truncated to 1000 significant bits; value = kPiHex * 2^-998.
inline constexpr std::string_view kPiHex =
    "c90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74020bbea63b139b22"
    "514a08798e3404ddef9519b3cd3a431b302b0a6df25f14374fe1356d6d51c245"
    "e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7edee386bfb5a899fa5"
    "ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf0598da48361c";
inline constexpr long kPiBits = 1000;

class BigFloat {
 public:
  explicit BigFloat(long precision = kReferencePrecision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
  }

  BigFloat(double v, long precision) {
    mpfr_init2(value_, precision);
    mpfr_set_d(value_, v, MPFR_RNDN);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
    value_[0] = other.value_[0];
    other.value_[0]._mpfr_d = nullptr;
  }

  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      if (value_[0]._mpfr_d == nullptr) {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
      } else {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      }
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }

  BigFloat& operator=(BigFloat&& other) noexcept {
    std::swap(value_[0], other.value_[0]);
    return *this;
  }

  ~BigFloat() {
    if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
  }

  static BigFloat exp2(long e, long precision) {
    BigFloat r(precision);
    mpfr_set_ui_2exp(r.value_, 1, e, MPFR_RNDN);
    return r;
  }

  static BigFloat from_int(std::int64_t v, long precision) {
    BigFloat r(precision);
    mpfr_set_sj(r.value_, v, MPFR_RNDN);
    return r;
  }

  // value = mantissa * 2^e, rounded to `precision`.
  static BigFloat from_scaled(std::uint64_t mantissa, long e, long precision) {
    BigFloat r(precision);
    mpfr_set_uj_2exp(r.value_, mantissa, e, MPFR_RNDN);
    return r;
  }

  static BigFloat nan(long precision) {
    BigFloat r(precision);
    mpfr_set_nan(r.value_);
    return r;
  }

  // Accepts decimal ("-1.25e-3") and C99 hex-float ("0x1.8p+3") text.
  static BigFloat parse(std::string_view text, long precision) {
    BigFloat r(precision);
    const std::string s(text);
    char* end = nullptr;
    mpfr_strtofr(r.value_, s.c_str(), &end, 0, MPFR_RNDN);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw std::invalid_argument("BigFloat: cannot parse '" + s + "'");
    }
    return r;
  }

  long precision() const { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  bool is_negative() const { return mpfr_signbit(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }

  // Exponent e such that |x| lies in [2^e, 2^(e+1)).  Undefined for 0 / NaN.
  long binary_exponent() const { return static_cast<long>(mpfr_get_exp(value_)) - 1; }

  BigFloat rounded(long precision) const {
    BigFloat r(precision);
    mpfr_set(r.value_, value_, MPFR_RNDN);
    return r;
  }

  BigFloat abs() const {
    BigFloat r(precision());
    mpfr_abs(r.value_, value_, MPFR_RNDN);
    return r;
  }

  BigFloat operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.value_, value_, MPFR_RNDN);
    return r;
  }

  std::string to_string(int digits = 0) const {
    char* buf = nullptr;
    if (digits > 0) {
      mpfr_asprintf(&buf, "%.*Re", digits, value_);
    } else {
      mpfr_asprintf(&buf, "%Re", value_);
    }
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  std::string to_hex() const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", value_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
    if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.value_, b.value_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  mpfr_t value_;
};

inline BigFloat big_add(const BigFloat& a, const BigFloat& b, long precision) {
  BigFloat r(precision);
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_sub(const BigFloat& a, const BigFloat& b, long precision) {
  BigFloat r(precision);
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_mul(const BigFloat& a, const BigFloat& b, long precision) {
  BigFloat r(precision);
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_div(const BigFloat& a, const BigFloat& b, long precision) {
  if (b.is_zero()) throw std::domain_error("big_div: division by zero");
  BigFloat r(precision);
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_sqrt(const BigFloat& a, long precision) {
  if (a.is_negative() && !a.is_zero()) throw std::domain_error("big_sqrt: negative argument");
  BigFloat r(precision);
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_pi(long precision) {
  if (precision > kPiBits - 8) throw std::invalid_argument("big_pi: precision exceeds stored constant");
  BigFloat r(kPiBits);
  const std::string hex(kPiHex);
  mpfr_set_str(r.get(), hex.c_str(), 16, MPFR_RNDN);
  mpfr_mul_2si(r.get(), r.get(), -(kPiBits - 2), MPFR_RNDN);
  return r.rounded(precision);
}

// sin/cos are correctly rounded at `precision` (MPFR guarantees this, which
// is tighter than the 1-ulp contract callers rely on).
inline BigFloat big_sin(const BigFloat& theta, long precision) {
  BigFloat r(precision);
  mpfr_sin(r.get(), theta.get(), MPFR_RNDN);
  return r;
}

inline BigFloat big_cos(const BigFloat& theta, long precision) {
  BigFloat r(precision);
  mpfr_cos(r.get(), theta.get(), MPFR_RNDN);
  return r;
}

// 2*pi*k/n evaluated from the stored pi at `precision` + 16 guard bits.
inline BigFloat big_turn_fraction(std::int64_t k, std::int64_t n, long precision) {
  const long work = precision + 16;
  BigFloat angle = big_mul(big_pi(work), BigFloat::from_int(2 * k, work), work);
  return big_div(angle, BigFloat::from_int(n, work), work);
}

}  // namespace positflow
