#pragma once

// Scalar formats the transforms are generic over.  A format object supplies
// add / sub / mul on its scalar type plus conversion to and from BigFloat.
// Conversions are exact in the to_real direction and correctly rounded in
// the from_real direction.

#include <concepts>
#include <string>

#include "positflow/bigfloat.hpp"
#include "positflow/posit.hpp"
#include "positflow/softfloat.hpp"

namespace positflow {

template <class F>
concept ArithmeticFormat = requires(const F& f, const typename F::Scalar& a) {
  { f.add(a, a) } -> std::convertible_to<typename F::Scalar>;
  { f.sub(a, a) } -> std::convertible_to<typename F::Scalar>;
  { f.mul(a, a) } -> std::convertible_to<typename F::Scalar>;
};

template <class F>
concept RealFormat = ArithmeticFormat<F> && requires(const F& f, const typename F::Scalar& a, const BigFloat& r) {
  { f.from_real(r) } -> std::convertible_to<typename F::Scalar>;
  { f.to_real(a) } -> std::convertible_to<BigFloat>;
  { f.key() } -> std::convertible_to<std::string>;
  { f.twiddle_precision() } -> std::convertible_to<long>;
};

struct Posit32Format {
  using Scalar = PositBits;
  bool fastmath = false;

  Scalar add(Scalar a, Scalar b) const { return posit_add(a, b, fastmath); }
  Scalar sub(Scalar a, Scalar b) const { return posit_sub(a, b, fastmath); }
  Scalar mul(Scalar a, Scalar b) const { return posit_mul(a, b, fastmath); }
  Scalar from_real(const BigFloat& v) const { return posit_from_real(v); }
  BigFloat to_real(Scalar a) const { return posit_to_real(a); }
  std::string key() const { return "posit32"; }
  long twiddle_precision() const { return 128; }
};

struct SoftFloat32Format {
  using Scalar = FloatBits;

  Scalar add(Scalar a, Scalar b) const { return sf32_add(a, b); }
  Scalar sub(Scalar a, Scalar b) const { return sf32_sub(a, b); }
  Scalar mul(Scalar a, Scalar b) const { return sf32_mul(a, b); }
  Scalar from_real(const BigFloat& v) const { return sf32_from_real(v); }
  BigFloat to_real(Scalar a) const { return sf32_to_real(a); }
  std::string key() const { return "float32"; }
  long twiddle_precision() const { return 128; }
};

// The host FPU's binary32, used as a speed reference in benchmarks.
struct NativeFloat32Format {
  using Scalar = float;

  Scalar add(Scalar a, Scalar b) const { return a + b; }
  Scalar sub(Scalar a, Scalar b) const { return a - b; }
  Scalar mul(Scalar a, Scalar b) const { return a * b; }
  Scalar from_real(const BigFloat& v) const { return native_float(sf32_from_real(v)); }
  BigFloat to_real(Scalar a) const { return sf32_to_real(float_bits(a)); }
  std::string key() const { return "native32"; }
  long twiddle_precision() const { return 128; }
};

struct BigFloatFormat {
  using Scalar = BigFloat;
  long precision = kReferencePrecision;

  Scalar add(const Scalar& a, const Scalar& b) const { return big_add(a, b, precision); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return big_sub(a, b, precision); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return big_mul(a, b, precision); }
  Scalar from_real(const BigFloat& v) const { return v.rounded(precision); }
  BigFloat to_real(const Scalar& a) const { return a; }
  std::string key() const { return "bigfloat" + std::to_string(precision); }
  long twiddle_precision() const { return precision + 32; }
};

}  // namespace positflow
