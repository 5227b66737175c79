#pragma once

// 1D pseudospectral wave propagation, u_tt = c^2 u_xx on a periodic grid,
// generic over the scalar format.
//
// Grid: N points spaced dx = 2 pi / (N d), so the domain length is 2 pi / d
// and the base wavenumber is d.  The Laplacian is IFFT(-(k^2) * FFT(u)) and
// time stepping is leapfrog:
//
//   u_next = 2 u - u_prev + (c dt)^2 Lap(u)
//
// Every operation on field values goes through the format.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "positflow/bigfloat.hpp"
#include "positflow/fft.hpp"
#include "positflow/format.hpp"
#include "positflow/posit.hpp"
#include "positflow/softfloat.hpp"

namespace positflow {

// amplitude * sin(mode * d * x), or cos when `cosine` is set.
struct WaveletTerm {
  double amplitude = 1.0;
  int mode = 1;
  bool cosine = false;
};

struct SpectralConfig {
  std::size_t n = 256;
  double d = 20.0;
  std::size_t steps = 1000;
  double c = 1.0;
  // dt = dt_factor * dx.  Stability needs c * dt * k_max = c * dt_factor * pi < 1.
  double dt_factor = 0.25;
  // sin(x) + cos(2x) / 2 scaled by 2/3 so the initial field spans [-1, 0.5].
  std::vector<WaveletTerm> wavelet{{2.0 / 3.0, 1, false}, {1.0 / 3.0, 2, true}};

  void validate() const {
    require_fft_size(n);
    if (!(d > 0.0) || !(c > 0.0) || !(dt_factor > 0.0)) {
      throw std::invalid_argument("spectral: d, c and dt_factor must be positive");
    }
    if (c * dt_factor * std::numbers::pi >= 1.0) {
      throw std::invalid_argument("spectral: time step violates c*dt*k_max < 1");
    }
    for (const auto& w : wavelet) {
      if (w.mode < 0 || static_cast<std::size_t>(w.mode) >= n / 2) {
        throw std::invalid_argument("spectral: wavelet mode not resolved by the grid");
      }
    }
  }

  BigFloat dx(long precision) const {
    const long work = precision + 16;
    const BigFloat denom = big_mul(BigFloat::from_int(static_cast<std::int64_t>(n), work), BigFloat(d, work), work);
    return big_div(big_mul(big_pi(work), BigFloat::exp2(1, work), work), denom, precision);
  }

  BigFloat dt(long precision) const { return big_mul(BigFloat(dt_factor, precision + 16), dx(precision + 16), precision); }
};

template <class S>
struct WaveState {
  std::vector<S> u;
  std::vector<S> u_prev;
};

// Analytic standing-wave solution with zero initial velocity:
// sum amplitude * trig(2 pi mode j / N) * cos(c * mode * d * t).
inline std::vector<BigFloat> exact_field(const SpectralConfig& cfg, const BigFloat& t, long precision) {
  const long work = precision + 32;
  std::vector<BigFloat> u(cfg.n, BigFloat(precision));
  for (const auto& w : cfg.wavelet) {
    const BigFloat omega_t = big_mul(BigFloat(cfg.c * w.mode * cfg.d, work), t, work);
    const BigFloat amp = big_mul(BigFloat(w.amplitude, work), big_cos(omega_t, work), work);
    for (std::size_t j = 0; j < cfg.n; ++j) {
      const BigFloat theta = big_turn_fraction(static_cast<std::int64_t>(w.mode) * static_cast<std::int64_t>(j),
                                               static_cast<std::int64_t>(cfg.n), work);
      const BigFloat shape = w.cosine ? big_cos(theta, work) : big_sin(theta, work);
      u[j] = big_add(u[j], big_mul(amp, shape, work), precision);
    }
  }
  return u;
}

// Values exactly representable as both float32 and posit32 nearest to v.
// Rounding to float32 first and then to posit32 lands on such a value: in
// [2^-20, 2^20] the posit32 grid contains the float32 grid, and elsewhere
// the posit32 value has at most as many significant bits as a float32.
inline BigFloat shared_32bit_value(const BigFloat& v) {
  return posit_to_real(posit_from_real(sf32_to_real(sf32_from_real(v))));
}

// Initial (u at t = 0, u at t = -dt).  By default both fields are snapped
// to values shared by every 32-bit format, so all runs start identically;
// `exact` keeps the analytic values instead.
inline WaveState<BigFloat> initial_condition(const SpectralConfig& cfg, long precision = kReferencePrecision,
                                             bool exact = false) {
  cfg.validate();
  WaveState<BigFloat> s;
  s.u = exact_field(cfg, BigFloat(precision), precision);
  s.u_prev = exact_field(cfg, -cfg.dt(precision), precision);
  if (!exact) {
    for (auto& v : s.u) v = shared_32bit_value(v);
    for (auto& v : s.u_prev) v = shared_32bit_value(v);
  }
  return s;
}

template <RealFormat F>
class WaveSolver {
 public:
  using Scalar = typename F::Scalar;

  WaveSolver(const SpectralConfig& cfg, F format) : cfg_(cfg), f_(std::move(format)) {
    cfg_.validate();
    twiddles_ = cached_twiddles(cfg_.n, f_);
    const long work = f_.twiddle_precision() + 32;
    const BigFloat d(cfg_.d, work);
    const auto n = static_cast<std::int64_t>(cfg_.n);
    factors_.reserve(cfg_.n);
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t wave = j <= n / 2 ? j : j - n;
      const BigFloat k = big_mul(d, BigFloat::from_int(wave, work), work);
      factors_.push_back(f_.from_real(-big_mul(k, k, work)));
    }
    const BigFloat cdt = big_mul(BigFloat(cfg_.c, work), cfg_.dt(work), work);
    step_coefficient_ = f_.from_real(big_mul(cdt, cdt, work));
  }

  const F& format() const { return f_; }
  const SpectralConfig& config() const { return cfg_; }

  std::vector<Scalar> laplacian(const std::vector<Scalar>& u) const {
    if (u.size() != cfg_.n) throw std::invalid_argument("spectral: field length mismatch");
    ComplexVec<Scalar> x;
    x.reserve(cfg_.n);
    const Scalar zero = f_.from_real(BigFloat(64));
    for (const auto& v : u) x.push_back({v, zero});
    ComplexVec<Scalar> spectrum = fft_forward(f_, x, *twiddles_);
    for (std::size_t j = 0; j < cfg_.n; ++j) {
      spectrum[j] = {f_.mul(spectrum[j].re, factors_[j]), f_.mul(spectrum[j].im, factors_[j])};
    }
    ComplexVec<Scalar> back = fft_inverse(f_, spectrum, *twiddles_);
    std::vector<Scalar> out;
    out.reserve(cfg_.n);
    for (auto& v : back) out.push_back(std::move(v.re));
    return out;
  }

  WaveState<Scalar> step(const WaveState<Scalar>& s) const {
    const std::vector<Scalar> lap = laplacian(s.u);
    WaveState<Scalar> next;
    next.u.reserve(cfg_.n);
    for (std::size_t j = 0; j < cfg_.n; ++j) {
      const Scalar twice = f_.add(s.u[j], s.u[j]);
      next.u.push_back(f_.add(f_.sub(twice, s.u_prev[j]), f_.mul(step_coefficient_, lap[j])));
    }
    next.u_prev = s.u;
    return next;
  }

  WaveState<Scalar> load(const WaveState<BigFloat>& s) const {
    WaveState<Scalar> out;
    for (const auto& v : s.u) out.u.push_back(f_.from_real(v));
    for (const auto& v : s.u_prev) out.u_prev.push_back(f_.from_real(v));
    return out;
  }

  std::vector<BigFloat> reals(const std::vector<Scalar>& u) const {
    std::vector<BigFloat> out;
    out.reserve(u.size());
    for (const auto& v : u) out.push_back(f_.to_real(v));
    return out;
  }

  // Runs cfg.steps steps from the shared initial condition.  `observe` (if
  // set) sees the field after every step.
  using Observer = std::function<void(std::size_t, const std::vector<Scalar>&)>;

  std::vector<Scalar> run(const Observer& observe = {}) const { return run_from(initial_condition(cfg_), observe); }

  std::vector<Scalar> run_from(const WaveState<BigFloat>& init, const Observer& observe = {}) const {
    WaveState<Scalar> s = load(init);
    for (std::size_t i = 0; i < cfg_.steps; ++i) {
      s = step(s);
      if (observe) observe(i + 1, s.u);
    }
    return s.u;
  }

 private:
  SpectralConfig cfg_;
  F f_;
  std::shared_ptr<const TwiddleTable<Scalar>> twiddles_;
  std::vector<Scalar> factors_;
  Scalar step_coefficient_;
};

template <RealFormat F>
std::vector<typename F::Scalar> spectral_laplacian(const std::vector<typename F::Scalar>& u, const SpectralConfig& cfg,
                                                   F f) {
  return WaveSolver<F>(cfg, std::move(f)).laplacian(u);
}

template <RealFormat F>
WaveState<typename F::Scalar> step_wave(const WaveState<typename F::Scalar>& s, const SpectralConfig& cfg, F f) {
  return WaveSolver<F>(cfg, std::move(f)).step(s);
}

// sqrt(sum (x_i - y_i)^2) for real fields.
inline BigFloat field_error_norm(const std::vector<BigFloat>& x, const std::vector<BigFloat>& y,
                                 long precision = kReferencePrecision) {
  if (x.size() != y.size()) throw std::invalid_argument("field_error_norm: length mismatch");
  BigFloat sum(precision);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const BigFloat diff = big_sub(x[i], y[i], precision);
    sum = big_add(sum, big_mul(diff, diff, precision), precision);
  }
  return big_sqrt(sum, precision);
}

// Final field of the high-precision reference run.
inline std::vector<BigFloat> spectral_reference(const SpectralConfig& cfg, long precision = kReferencePrecision) {
  return WaveSolver<BigFloatFormat>(cfg, BigFloatFormat{precision}).run();
}

struct SpectralResult {
  std::vector<BigFloat> field;
  BigFloat error_norm;
};

// Runs `f` and compares against the reference field (computed here when
// not supplied).
template <RealFormat F>
SpectralResult run_spectral(const SpectralConfig& cfg, F f, const std::vector<BigFloat>* reference = nullptr) {
  const WaveSolver<F> solver(cfg, std::move(f));
  SpectralResult r;
  r.field = solver.reals(solver.run());
  if (reference != nullptr) {
    r.error_norm = field_error_norm(r.field, *reference);
  } else {
    r.error_norm = field_error_norm(r.field, spectral_reference(cfg));
  }
  return r;
}

}  // namespace positflow
