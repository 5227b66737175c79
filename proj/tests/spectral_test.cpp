#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "positflow/spectral.hpp"

namespace positflow {
namespace {

constexpr long P = kReferencePrecision;

SpectralConfig small_config(std::size_t n, double d = 1.0) {
  SpectralConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.steps = 0;
  return cfg;
}

std::vector<BigFloat> mode_field(std::size_t n, int mode, bool cosine, long prec) {
  std::vector<BigFloat> u;
  for (std::size_t j = 0; j < n; ++j) {
    const BigFloat theta = big_turn_fraction(mode * static_cast<std::int64_t>(j), static_cast<std::int64_t>(n), prec);
    u.push_back(cosine ? big_cos(theta, prec) : big_sin(theta, prec));
  }
  return u;
}

TEST(Spectral, SineIsAnEigenfunction) {
  const SpectralConfig cfg = small_config(64);
  for (int m : {1, 3, 31}) {
    const auto u = mode_field(cfg.n, m, false, P);
    const auto lap = spectral_laplacian(u, cfg, BigFloatFormat{P});
    std::vector<BigFloat> expected;
    for (const auto& v : u) expected.push_back(big_mul(BigFloat(-m * m, P), v, P));
    EXPECT_LE(field_error_norm(lap, expected), BigFloat::exp2(-230, 64)) << m;
  }
}

TEST(Spectral, ScalesWithWavenumberBase) {
  // On a grid of length 2 pi / d, mode m has wavenumber m d.
  const SpectralConfig cfg = small_config(32, 20.0);
  const auto u = mode_field(cfg.n, 2, true, P);
  const auto lap = spectral_laplacian(u, cfg, BigFloatFormat{P});
  std::vector<BigFloat> expected;
  for (const auto& v : u) expected.push_back(big_mul(BigFloat(-1600.0, P), v, P));
  EXPECT_LE(field_error_norm(lap, expected), BigFloat::exp2(-215, 64));
}

TEST(Spectral, ConstantFieldHasZeroLaplacian) {
  const SpectralConfig cfg = small_config(128);
  const std::vector<BigFloat> u(cfg.n, BigFloat(0.3, P));
  const auto lap = spectral_laplacian(u, cfg, BigFloatFormat{P});
  EXPECT_LE(field_error_norm(lap, std::vector<BigFloat>(cfg.n, BigFloat(P))), BigFloat::exp2(-230, 64));
  // In posit32 the DC term is exact and every other bin is zero.
  std::vector<PositBits> pu(cfg.n, posit_from_real(BigFloat(0.3, 64)));
  for (const auto& v : spectral_laplacian(pu, cfg, Posit32Format{})) ASSERT_EQ(v, kPositZero);
}

TEST(Spectral, AgreesWithFiniteDifferences) {
  // Central second difference has error dx^2 / 12 * u''''; the spectral
  // Laplacian must sit inside that band.
  const SpectralConfig cfg = small_config(256);
  const auto u = exact_field(cfg, BigFloat(P), P);
  const auto lap = spectral_laplacian(u, cfg, BigFloatFormat{P});
  const BigFloat dx = cfg.dx(P);
  const BigFloat inv_dx2 = big_div(BigFloat(1.0, P), big_mul(dx, dx, P), P);
  const double dx_d = dx.to_double();
  const std::size_t n = cfg.n;
  for (std::size_t j = 0; j < n; ++j) {
    const BigFloat second = big_sub(big_add(u[(j + 1) % n], u[(j + n - 1) % n], P), big_add(u[j], u[j], P), P);
    const double fd = big_mul(second, inv_dx2, P).to_double();
    // |u''''| <= sum |a| m^4 = 2/3 + 16/3.
    ASSERT_NEAR(lap[j].to_double(), fd, 6.0 * dx_d * dx_d / 12.0 * 1.01) << j;
  }
}

TEST(Spectral, ZeroFieldStaysZero) {
  SpectralConfig cfg = small_config(64, 20.0);
  cfg.steps = 25;
  for (auto& w : cfg.wavelet) w.amplitude = 0.0;
  const WaveSolver<Posit32Format> ps(cfg, Posit32Format{});
  for (const auto& v : ps.run()) ASSERT_EQ(v, kPositZero);
  const WaveSolver<SoftFloat32Format> fs(cfg, SoftFloat32Format{});
  for (const auto& v : fs.run()) ASSERT_EQ(v.bits & 0x7FFFFFFFu, 0u);
}

TEST(Spectral, NoStepsMeansNoError) {
  SpectralConfig cfg = small_config(64, 20.0);
  const auto reference = spectral_reference(cfg);
  EXPECT_TRUE(run_spectral(cfg, Posit32Format{}, &reference).error_norm.is_zero());
  EXPECT_TRUE(run_spectral(cfg, SoftFloat32Format{}, &reference).error_norm.is_zero());
}

TEST(Spectral, LeapfrogIsSecondOrderInTime) {
  const long prec = 128;
  const auto error_at = [&](double dt_factor, std::size_t steps) {
    SpectralConfig cfg = small_config(16);
    cfg.dt_factor = dt_factor;
    cfg.steps = steps;
    const WaveSolver<BigFloatFormat> solver(cfg, BigFloatFormat{prec});
    const auto u = solver.run_from(initial_condition(cfg, prec, true));
    const BigFloat t = big_mul(BigFloat::from_int(static_cast<std::int64_t>(steps), prec), cfg.dt(prec), prec);
    return field_error_norm(u, exact_field(cfg, t, prec), prec).to_double();
  };
  const double coarse = error_at(0.25, 40);
  const double fine = error_at(0.125, 80);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST(Spectral, ReferenceIsConvergedInPrecision) {
  SpectralConfig cfg = small_config(64, 20.0);
  cfg.steps = 50;
  const auto r250 = spectral_reference(cfg, 250);
  const auto r300 = spectral_reference(cfg, 300);
  EXPECT_LE(field_error_norm(r250, r300, 300), BigFloat::exp2(-200, 64));
}

TEST(Spectral, PositTracksReferenceAtLeastAsWellAsFloat) {
  SpectralConfig cfg = small_config(256, 20.0);
  cfg.steps = 100;
  const auto reference = spectral_reference(cfg);
  const BigFloat pe = run_spectral(cfg, Posit32Format{}, &reference).error_norm;
  const BigFloat fe = run_spectral(cfg, SoftFloat32Format{}, &reference).error_norm;
  EXPECT_LE(pe, fe);
  EXPECT_LT(pe, BigFloat(1e-4, 64));
}

TEST(Spectral, ObserverSeesEveryStep) {
  SpectralConfig cfg = small_config(16, 20.0);
  cfg.steps = 7;
  std::size_t calls = 0;
  const WaveSolver<SoftFloat32Format> s(cfg, SoftFloat32Format{});
  const auto last = s.run([&](std::size_t i, const std::vector<FloatBits>& u) {
    EXPECT_EQ(i, ++calls);
    EXPECT_EQ(u.size(), cfg.n);
  });
  EXPECT_EQ(calls, 7u);
  EXPECT_EQ(last.size(), cfg.n);
}

TEST(Spectral, RejectsUnstableOrBadConfigs) {
  SpectralConfig cfg = small_config(64);
  cfg.dt_factor = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config(48);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config(4);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);  // mode 2 needs N > 4
  cfg = small_config(64);
  cfg.d = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(WaveSolver<Posit32Format>(cfg, Posit32Format{}), std::invalid_argument);
}

}  // namespace
}  // namespace positflow
