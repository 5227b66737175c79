#pragma once

// Radix-4 Stockham FFT / IFFT over any ArithmeticFormat.
//
// Stockham autosort: natural order in, natural order out, two ping-pong
// buffers and no bit-reversal pass.  Power-of-two sizes that are not powers
// of four finish with a single radix-2 stage.  Every butterfly uses only the
// format's add / sub / mul; complex products use the 4-mul / 2-add form.

#include <array>
#include <bit>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "positflow/bigfloat.hpp"
#include "positflow/format.hpp"

namespace positflow {

template <class S>
struct Complex {
  S re;
  S im;
};

template <class S>
using ComplexVec = std::vector<Complex<S>>;

template <ArithmeticFormat F, class S = typename F::Scalar>
Complex<S> complex_add(const F& f, const Complex<S>& a, const Complex<S>& b) {
  return {f.add(a.re, b.re), f.add(a.im, b.im)};
}

template <ArithmeticFormat F, class S = typename F::Scalar>
Complex<S> complex_sub(const F& f, const Complex<S>& a, const Complex<S>& b) {
  return {f.sub(a.re, b.re), f.sub(a.im, b.im)};
}

template <ArithmeticFormat F, class S = typename F::Scalar>
Complex<S> complex_mul(const F& f, const Complex<S>& a, const Complex<S>& b) {
  return {f.sub(f.mul(a.re, b.re), f.mul(a.im, b.im)), f.add(f.mul(a.re, b.im), f.mul(a.im, b.re))};
}

// One radix-4 butterfly.  `inverse` selects the +i rotation; the twiddles
// passed in must already be the matching (conjugated) ones.
template <ArithmeticFormat F, class S = typename F::Scalar>
std::array<Complex<S>, 4> radix4_butterfly(const F& f, const Complex<S>& a, const Complex<S>& b,
                                           const Complex<S>& c, const Complex<S>& d, const Complex<S>& w1,
                                           const Complex<S>& w2, const Complex<S>& w3, bool inverse) {
  const Complex<S> apc = complex_add(f, a, c);
  const Complex<S> amc = complex_sub(f, a, c);
  const Complex<S> bpd = complex_add(f, b, d);
  const Complex<S> bmd = complex_sub(f, b, d);
  // amc -/+ i*(b - d) without a negation.
  const Complex<S> amc_minus_jbmd{f.add(amc.re, bmd.im), f.sub(amc.im, bmd.re)};
  const Complex<S> amc_plus_jbmd{f.sub(amc.re, bmd.im), f.add(amc.im, bmd.re)};
  const Complex<S>& odd1 = inverse ? amc_plus_jbmd : amc_minus_jbmd;
  const Complex<S>& odd3 = inverse ? amc_minus_jbmd : amc_plus_jbmd;
  return {complex_add(f, apc, bpd), complex_mul(f, w1, odd1), complex_mul(f, w2, complex_sub(f, apc, bpd)),
          complex_mul(f, w3, odd3)};
}

template <ArithmeticFormat F, class S = typename F::Scalar>
std::array<Complex<S>, 2> radix2_butterfly(const F& f, const Complex<S>& a, const Complex<S>& b) {
  return {complex_add(f, a, b), complex_sub(f, a, b)};
}

inline bool is_supported_fft_size(std::size_t n) { return n >= 4 && std::has_single_bit(n); }

inline void require_fft_size(std::size_t n) {
  if (!is_supported_fft_size(n)) {
    throw std::invalid_argument("fft: length " + std::to_string(n) + " is not a power of two >= 4");
  }
}

// Roots of unity e^(-2 pi i k / N) (forward) and their conjugates, each the
// correctly rounded image of a BigFloat cos / sin, plus 1/N for the IFFT.
template <class S>
struct TwiddleTable {
  std::size_t size = 0;
  ComplexVec<S> forward;
  ComplexVec<S> inverse;
  S inverse_scale;
};

template <RealFormat F>
TwiddleTable<typename F::Scalar> build_twiddles(std::size_t n, const F& f) {
  require_fft_size(n);
  const long prec = f.twiddle_precision();
  const std::size_t quarter = n / 4;
  const std::size_t eighth = n / 8;

  // cos / sin of 2 pi k / N for k in [0, N/4].  Only the first octant is
  // evaluated; the rest follow by exact reflection.
  std::vector<BigFloat> cos_q(quarter + 1, BigFloat(prec));
  std::vector<BigFloat> sin_q(quarter + 1, BigFloat(prec));
  for (std::size_t k = 0; k <= eighth; ++k) {
    const BigFloat theta = big_turn_fraction(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n), prec);
    cos_q[k] = big_cos(theta, prec);
    sin_q[k] = big_sin(theta, prec);
  }
  for (std::size_t k = eighth + 1; k <= quarter; ++k) {
    cos_q[k] = sin_q[quarter - k];
    sin_q[k] = cos_q[quarter - k];
  }

  TwiddleTable<typename F::Scalar> t{n, {}, {}, f.from_real(BigFloat::exp2(-std::countr_zero(n), 64))};
  t.forward.reserve(n);
  t.inverse.reserve(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    BigFloat c(prec);
    BigFloat s(prec);
    if (k <= quarter) {
      c = cos_q[k];
      s = sin_q[k];
    } else if (k <= half) {
      c = -cos_q[half - k];
      s = sin_q[half - k];
    } else if (k <= half + quarter) {
      c = -cos_q[k - half];
      s = -sin_q[k - half];
    } else {
      c = cos_q[n - k];
      s = -sin_q[n - k];
    }
    t.forward.push_back({f.from_real(c), f.from_real(-s)});
    t.inverse.push_back({f.from_real(c), f.from_real(s)});
  }
  return t;
}

// Tables are built once per (N, format) and shared read-only afterwards.
template <RealFormat F>
std::shared_ptr<const TwiddleTable<typename F::Scalar>> cached_twiddles(std::size_t n, const F& f) {
  using Table = TwiddleTable<typename F::Scalar>;
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::string>, std::shared_ptr<const Table>> cache;
  const auto key = std::pair{n, f.key()};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const Table>(build_twiddles(n, f));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

namespace detail {

template <ArithmeticFormat F, class S = typename F::Scalar>
ComplexVec<S> stockham(const F& f, const ComplexVec<S>& x, const TwiddleTable<S>& t, bool inverse) {
  const std::size_t n_total = x.size();
  require_fft_size(n_total);
  if (t.size != n_total) throw std::invalid_argument("fft: twiddle table built for a different length");
  const ComplexVec<S>& roots = inverse ? t.inverse : t.forward;

  ComplexVec<S> src = x;
  ComplexVec<S> dst = x;
  std::size_t n = n_total;
  std::size_t stride = 1;
  for (; n >= 4; n /= 4, stride *= 4) {
    const std::size_t m = n / 4;
    for (std::size_t p = 0; p < m; ++p) {
      const Complex<S>& w1 = roots[p * stride];
      const Complex<S>& w2 = roots[2 * p * stride];
      const Complex<S>& w3 = roots[3 * p * stride];
      for (std::size_t q = 0; q < stride; ++q) {
        auto y = radix4_butterfly(f, src[q + stride * p], src[q + stride * (p + m)], src[q + stride * (p + 2 * m)],
                                  src[q + stride * (p + 3 * m)], w1, w2, w3, inverse);
        for (std::size_t r = 0; r < 4; ++r) dst[q + stride * (4 * p + r)] = std::move(y[r]);
      }
    }
    std::swap(src, dst);
  }
  if (n == 2) {
    for (std::size_t q = 0; q < stride; ++q) {
      auto y = radix2_butterfly(f, src[q], src[q + stride]);
      dst[q] = std::move(y[0]);
      dst[q + stride] = std::move(y[1]);
    }
    std::swap(src, dst);
  }
  if (inverse) {
    for (auto& v : src) v = {f.mul(v.re, t.inverse_scale), f.mul(v.im, t.inverse_scale)};
  }
  return src;
}

}  // namespace detail

template <ArithmeticFormat F, class S = typename F::Scalar>
ComplexVec<S> fft_forward(const F& f, const ComplexVec<S>& x, const TwiddleTable<S>& t) {
  return detail::stockham(f, x, t, false);
}

template <ArithmeticFormat F, class S = typename F::Scalar>
ComplexVec<S> fft_inverse(const F& f, const ComplexVec<S>& x, const TwiddleTable<S>& t) {
  return detail::stockham(f, x, t, true);
}

template <RealFormat F, class S = typename F::Scalar>
ComplexVec<S> fft_forward(const F& f, const ComplexVec<S>& x) {
  return fft_forward(f, x, *cached_twiddles(x.size(), f));
}

template <RealFormat F, class S = typename F::Scalar>
ComplexVec<S> fft_inverse(const F& f, const ComplexVec<S>& x) {
  return fft_inverse(f, x, *cached_twiddles(x.size(), f));
}

template <RealFormat F, class S = typename F::Scalar>
ComplexVec<S> to_format(const F& f, const std::vector<Complex<BigFloat>>& values) {
  ComplexVec<S> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back({f.from_real(v.re), f.from_real(v.im)});
  return out;
}

template <RealFormat F, class S = typename F::Scalar>
std::vector<Complex<BigFloat>> to_reals(const F& f, const ComplexVec<S>& values) {
  std::vector<Complex<BigFloat>> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back({f.to_real(v.re), f.to_real(v.im)});
  return out;
}

// sqrt(sum |x_i - y_i|^2) over real and imaginary parts.
inline BigFloat error_norm(const std::vector<Complex<BigFloat>>& x, const std::vector<Complex<BigFloat>>& y,
                           long precision = kReferencePrecision) {
  if (x.size() != y.size()) throw std::invalid_argument("error_norm: length mismatch");
  BigFloat sum(precision);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const BigFloat dr = big_sub(x[i].re, y[i].re, precision);
    const BigFloat di = big_sub(x[i].im, y[i].im, precision);
    sum = big_add(sum, big_mul(dr, dr, precision), precision);
    sum = big_add(sum, big_mul(di, di, precision), precision);
  }
  return big_sqrt(sum, precision);
}

}  // namespace positflow
