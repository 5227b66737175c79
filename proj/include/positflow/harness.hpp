#pragma once

// Experiment drivers behind the command-line tool.  Each command returns its
// full output as a string so runs can be compared byte for byte; only
// `bench` depends on the machine.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "positflow/bigfloat.hpp"
#include "positflow/cost.hpp"
#include "positflow/fft.hpp"
#include "positflow/format.hpp"
#include "positflow/opgraph.hpp"
#include "positflow/oracle.hpp"
#include "positflow/posit.hpp"
#include "positflow/rng.hpp"
#include "positflow/softfloat.hpp"
#include "positflow/spectral.hpp"

namespace positflow::harness {

// Bad flags, sizes or format names; the CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMinSizeExponent = 4;
inline constexpr int kMaxSizeExponent = 28;
// Sizes from here on take a long time with the 32-bit software formats.
inline constexpr int kLongRunningExponent = 20;

struct RunConfig {
  std::string command;
  std::vector<int> sizes;              // exponents; empty means the command default
  std::vector<std::string> formats;    // empty means the command default
  std::uint64_t seed = 1;
  std::size_t samples = 0;             // 0 means the command default
  long precision = kReferencePrecision;
  // Posit kernels without NaR handling.  Unset means the command default:
  // on for cost-report, off everywhere else.
  std::optional<bool> fastmath;
  InputDistribution dist = InputDistribution::TruncatedNormal;
  std::size_t threads = 0;             // 0 means hardware concurrency

  // spectral-accuracy
  std::size_t steps = 1000;
  double d = 20.0;
  double c = 1.0;
  double dt_factor = 0.25;
  std::string snapshot_path;           // CSV of (x, u) snapshots, if set
  std::size_t snapshot_every = 100;

  // conformance
  std::size_t roundtrip_samples = 10'000'000;

  // bench
  std::size_t repeats = 5;

  // cost-report
  std::string dot_dir;                 // one DOT file per operator, if set
};

inline bool fastmath_or(const RunConfig& cfg, bool command_default) { return cfg.fastmath.value_or(command_default); }

struct CommandResult {
  std::string output;
  int exit_code = 0;
  std::string log;  // human-readable notes for stderr
};

inline std::vector<std::size_t> resolve_sizes(const RunConfig& cfg, std::vector<int> defaults) {
  const std::vector<int>& exps = cfg.sizes.empty() ? defaults : cfg.sizes;
  std::vector<std::size_t> out;
  for (int e : exps) {
    if (e < kMinSizeExponent || e > kMaxSizeExponent) {
      throw UsageError("size exponent " + std::to_string(e) + " outside " + std::to_string(kMinSizeExponent) + ".." +
                       std::to_string(kMaxSizeExponent));
    }
    out.push_back(std::size_t{1} << e);
  }
  return out;
}

inline std::vector<std::string> resolve_formats(const RunConfig& cfg, std::vector<std::string> defaults,
                                                const std::vector<std::string>& allowed) {
  std::vector<std::string> out = cfg.formats.empty() ? defaults : cfg.formats;
  for (const auto& f : out) {
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw UsageError("format '" + f + "' not supported here (choose from " + list + ")");
    }
  }
  return out;
}

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Long-form CSV: command,format,N,seed,metric,value
class CsvWriter {
 public:
  static constexpr const char* kHeader = "command,format,N,seed,metric,value";

  CsvWriter() { out_ << kHeader << '\n'; }

  void row(const std::string& command, const std::string& format, std::optional<std::size_t> n, std::uint64_t seed,
           const std::string& metric, const std::string& value) {
    out_ << command << ',' << format << ',' << (n ? std::to_string(*n) : "") << ',' << seed << ',' << metric << ','
         << value << '\n';
  }
  void row(const std::string& command, const std::string& format, std::optional<std::size_t> n, std::uint64_t seed,
           const std::string& metric, double value) {
    row(command, format, n, seed, metric, format_value(value));
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline std::size_t worker_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0..count-1) on a small pool; results come back in index order.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t threads, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(threads, count);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// fft-accuracy -----------------------------------------------------------------

// Random complex input of length n in [-1, 1].  Every component is a value
// shared by float32 and posit32, so all formats start from the same numbers
// and the error measures the transform alone.
inline std::vector<Complex<BigFloat>> accuracy_input(std::size_t n, std::uint64_t seed, InputDistribution dist) {
  SplitMix64 rng(seed);
  std::vector<Complex<BigFloat>> x;
  x.reserve(n);
  const auto draw = [&] { return shared_32bit_value(BigFloat(sample_input(rng, dist), 64)); };
  for (std::size_t i = 0; i < n; ++i) {
    BigFloat re = draw();
    x.push_back({std::move(re), draw()});
  }
  return x;
}

template <RealFormat F>
BigFloat round_trip_error(const F& f, const std::vector<Complex<BigFloat>>& x) {
  const auto back = fft_inverse(f, fft_forward(f, to_format(f, x)));
  return error_norm(to_reals(f, back), x);
}

inline BigFloat round_trip_error(const std::string& format, const RunConfig& cfg,
                                 const std::vector<Complex<BigFloat>>& x) {
  if (format == "posit32") return round_trip_error(Posit32Format{fastmath_or(cfg, false)}, x);
  if (format == "float32") return round_trip_error(SoftFloat32Format{}, x);
  if (format == "native32") return round_trip_error(NativeFloat32Format{}, x);
  if (format == "bigfloat") return round_trip_error(BigFloatFormat{cfg.precision}, x);
  throw UsageError("unknown format " + format);
}

inline CommandResult cmd_fft_accuracy(const RunConfig& cfg) {
  const auto sizes = resolve_sizes(cfg, {8, 10, 12, 14, 16});
  const auto formats = resolve_formats(cfg, {"posit32", "float32"}, {"posit32", "float32", "native32", "bigfloat"});
  const std::size_t samples = cfg.samples == 0 ? 1 : cfg.samples;

  struct Point {
    std::size_t n;
    std::size_t sample;
  };
  std::vector<Point> points;
  for (std::size_t n : sizes) {
    for (std::size_t s = 0; s < samples; ++s) points.push_back({n, s});
  }
  // norms[point][format]
  const auto norms = parallel_map(points.size(), worker_count(cfg), [&](std::size_t i) {
    const auto x = accuracy_input(points[i].n, derive_seed(cfg.seed, points[i].n * 65536 + points[i].sample), cfg.dist);
    std::vector<double> out;
    for (const auto& f : formats) out.push_back(round_trip_error(f, cfg, x).to_double());
    return out;
  });

  CsvWriter csv;
  for (std::size_t fi = 0; fi < formats.size(); ++fi) {
    const std::string& f = formats[fi] == "bigfloat" ? "bigfloat" + std::to_string(cfg.precision) : formats[fi];
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      double sum = 0.0;
      double worst = 0.0;
      for (std::size_t s = 0; s < samples; ++s) {
        const double v = norms[si * samples + s][fi];
        sum += v;
        worst = std::max(worst, v);
      }
      csv.row("fft-accuracy", f, sizes[si], cfg.seed, "error_norm", sum / static_cast<double>(samples));
      if (samples > 1) csv.row("fft-accuracy", f, sizes[si], cfg.seed, "error_norm_max", worst);
    }
  }
  return {csv.str(), 0, {}};
}

// spectral-accuracy ------------------------------------------------------------

inline SpectralConfig spectral_config(const RunConfig& cfg, std::size_t n) {
  SpectralConfig s;
  s.n = n;
  s.d = cfg.d;
  s.c = cfg.c;
  s.steps = cfg.steps;
  s.dt_factor = cfg.dt_factor;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

struct SpectralPoint {
  std::vector<double> norms;  // one per format
  std::string snapshots;      // CSV body rows
};

template <RealFormat F>
BigFloat spectral_error(const SpectralConfig& s, const F& f, const std::vector<BigFloat>& reference,
                        const std::string& name, const RunConfig& cfg, std::string& snapshots) {
  const WaveSolver<F> solver(s, f);
  typename WaveSolver<F>::Observer observe;
  if (!cfg.snapshot_path.empty()) {
    const double dx = s.dx(64).to_double();
    observe = [&](std::size_t step, const std::vector<typename F::Scalar>& u) {
      if (step % cfg.snapshot_every != 0 && step != s.steps) return;
      std::ostringstream rows;
      for (std::size_t j = 0; j < u.size(); ++j) {
        rows << name << ',' << s.n << ',' << step << ',' << format_value(dx * static_cast<double>(j)) << ','
             << format_value(f.to_real(u[j]).to_double()) << '\n';
      }
      snapshots += rows.str();
    };
  }
  return field_error_norm(solver.reals(solver.run(observe)), reference);
}

inline CommandResult cmd_spectral_accuracy(const RunConfig& cfg) {
  const auto sizes = resolve_sizes(cfg, {6, 7, 8, 9, 10, 11, 12});
  const auto formats = resolve_formats(cfg, {"posit32", "float32"}, {"posit32", "float32", "native32"});
  if (cfg.snapshot_every == 0) throw UsageError("snapshot interval must be positive");
  std::vector<SpectralConfig> configs;
  for (std::size_t n : sizes) configs.push_back(spectral_config(cfg, n));

  const auto points = parallel_map(sizes.size(), worker_count(cfg), [&](std::size_t i) {
    const SpectralConfig& s = configs[i];
    const auto reference = spectral_reference(s, cfg.precision);
    SpectralPoint p;
    for (const auto& f : formats) {
      BigFloat e(64);
      if (f == "posit32") e = spectral_error(s, Posit32Format{fastmath_or(cfg, false)}, reference, f, cfg, p.snapshots);
      if (f == "float32") e = spectral_error(s, SoftFloat32Format{}, reference, f, cfg, p.snapshots);
      if (f == "native32") e = spectral_error(s, NativeFloat32Format{}, reference, f, cfg, p.snapshots);
      p.norms.push_back(e.to_double());
    }
    return p;
  });

  CsvWriter csv;
  for (std::size_t fi = 0; fi < formats.size(); ++fi) {
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      csv.row("spectral-accuracy", formats[fi], sizes[si], cfg.seed, "error_norm", points[si].norms[fi]);
    }
  }
  if (!cfg.snapshot_path.empty()) {
    std::ofstream out(cfg.snapshot_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.snapshot_path);
    out << "format,N,step,x,u\n";
    for (const auto& p : points) out << p.snapshots;
  }
  return {csv.str(), 0, {}};
}

// conformance ------------------------------------------------------------------

struct SuiteResult {
  explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> examples;  // first few failures

  void check(bool ok, const std::function<std::string()>& describe) {
    ++cases;
    if (ok) return;
    ++failures;
    if (examples.size() < 5) examples.push_back(describe());
  }

  void merge(const SuiteResult& other) {
    cases += other.cases;
    failures += other.failures;
    for (const auto& e : other.examples) {
      if (examples.size() < 5) examples.push_back(e);
    }
  }
};

// Patterns covering every scale band, both fraction extremes, the
// neighbours of 0, +-1, minPos and maxPos, and the special values.
inline std::vector<std::uint32_t> directed_posit_patterns() {
  std::vector<std::uint32_t> d;
  for (int sf = -120; sf <= 120; sf += 4) {
    for (std::uint32_t fraction : {0u, 0xFFFFFFFFu}) {
      d.push_back(posit_encode({0, sf, fraction, PositState::Normal}).bits);
    }
  }
  for (int sf : {-119, -117, -1, 1, 117, 119}) d.push_back(posit_encode({0, sf, 0x55555555u, PositState::Normal}).bits);
  for (std::uint32_t p : {1u, 2u, 3u, 0x7FFFFFFFu, 0x7FFFFFFEu, 0x7FFFFFFDu, 0x40000000u, 0x40000001u, 0x3FFFFFFFu}) {
    d.push_back(p);
  }
  const std::size_t positives = d.size();
  for (std::size_t i = 0; i < positives; ++i) d.push_back(static_cast<std::uint32_t>(-d[i]));
  d.push_back(0);
  d.push_back(0x80000000u);
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

enum class PositOp { Add, Sub, Mul };

inline std::string_view posit_op_name(PositOp op) {
  return op == PositOp::Add ? "posit_add" : op == PositOp::Sub ? "posit_sub" : "posit_mul";
}

inline PositBits posit_expected(PositOp op, PositBits a, PositBits b) {
  if (a == kPositNaR || b == kPositNaR) return kPositNaR;
  // 512 bits hold any exact sum or product of two posit32 values.
  constexpr long kExact = 512;
  const BigFloat x = posit_to_real(a);
  const BigFloat y = posit_to_real(b);
  const BigFloat r = op == PositOp::Add   ? big_add(x, y, kExact)
                     : op == PositOp::Sub ? big_sub(x, y, kExact)
                                          : big_mul(x, y, kExact);
  return PositBits{oracle::round_to_posit32(r)};
}

inline PositBits posit_actual(PositOp op, PositBits a, PositBits b, bool fastmath) {
  return op == PositOp::Add ? posit_add(a, b, fastmath) : op == PositOp::Sub ? posit_sub(a, b, fastmath)
                                                                             : posit_mul(a, b, fastmath);
}

inline void check_posit_pair(SuiteResult& r, PositOp op, PositBits a, PositBits b, bool fastmath) {
  // Fast-math kernels are only defined away from NaR.
  if (fastmath && (a == kPositNaR || b == kPositNaR)) return;
  const PositBits got = posit_actual(op, a, b, fastmath);
  const PositBits want = posit_expected(op, a, b);
  r.check(got == want, [&] {
    return std::string(posit_op_name(op)) + "(" + to_hex(a) + ", " + to_hex(b) + ") = " + to_hex(got) + ", expected " +
           to_hex(want);
  });
}

// Random float32 with a normal exponent field in [lo, hi].
inline FloatBits random_normal_float(SplitMix64& rng, int lo, int hi) {
  const auto r = rng.next();
  const auto exp = static_cast<std::uint32_t>(lo + static_cast<int>(r % static_cast<std::uint64_t>(hi - lo + 1)));
  return FloatBits{static_cast<std::uint32_t>((r >> 32) & 0x807FFFFFu) | (exp << 23)};
}

inline constexpr std::size_t kConformanceChunk = 1u << 16;

inline std::size_t conformance_chunks(std::size_t total) {
  return (total + kConformanceChunk - 1) / kConformanceChunk;
}

inline std::size_t conformance_chunk_len(std::size_t total, std::size_t c) {
  return std::min(kConformanceChunk, total - c * kConformanceChunk);
}

inline std::size_t conformance_samples(const RunConfig& cfg) { return cfg.samples == 0 ? 1'000'000 : cfg.samples; }

// Posit arithmetic against the rounding oracle, encode/decode round trips
// and decoded values against the field reader.
inline std::vector<SuiteResult> posit_conformance(const RunConfig& cfg) {
  const std::size_t samples = conformance_samples(cfg);
  const std::size_t threads = worker_count(cfg);
  const auto chunks = conformance_chunks;
  const auto chunk_len = conformance_chunk_len;
  std::vector<SuiteResult> suites;

  // Posit arithmetic: directed pairs then seeded random pairs with a share
  // of near-cancelling operands.
  const bool fastmath = fastmath_or(cfg, false);
  const auto directed = directed_posit_patterns();
  for (PositOp op : {PositOp::Add, PositOp::Sub, PositOp::Mul}) {
    const std::string name(posit_op_name(op));
    SuiteResult directed_suite{name + "_directed"};
    const auto rows = parallel_map(directed.size(), threads, [&](std::size_t i) {
      SuiteResult r;
      const PositBits a{directed[i]};
      for (std::uint32_t bb : directed) check_posit_pair(r, op, a, PositBits{bb}, fastmath);
      // Neighbours of -a and a cancel almost completely.
      for (int delta : {-2, -1, 1, 2}) {
        check_posit_pair(r, op, a, PositBits{static_cast<std::uint32_t>(-a.bits + delta)}, fastmath);
        check_posit_pair(r, op, a, PositBits{static_cast<std::uint32_t>(a.bits + delta)}, fastmath);
      }
      return r;
    });
    for (const auto& r : rows) directed_suite.merge(r);
    suites.push_back(std::move(directed_suite));

    SuiteResult random_suite{name};
    const auto parts = parallel_map(chunks(samples), threads, [&](std::size_t c) {
      SuiteResult r;
      SplitMix64 rng(derive_seed(cfg.seed, (static_cast<std::uint64_t>(op) + 1) << 32 | c));
      for (std::size_t i = 0; i < chunk_len(samples, c); ++i) {
        const PositBits a{static_cast<std::uint32_t>(rng.next())};
        PositBits b{static_cast<std::uint32_t>(rng.next())};
        if (i % 8 == 0) b = PositBits{static_cast<std::uint32_t>(-a.bits + (rng.next() % 33) - 16)};
        check_posit_pair(r, op, a, b, fastmath);
      }
      return r;
    });
    for (const auto& r : parts) random_suite.merge(r);
    suites.push_back(std::move(random_suite));
  }

  // Encode after decode is the identity on every non-special pattern.
  {
    SuiteResult s{"posit_roundtrip"};
    const std::size_t total = cfg.roundtrip_samples;
    const auto parts = parallel_map(chunks(total), threads, [&](std::size_t c) {
      SuiteResult r;
      SplitMix64 rng(derive_seed(cfg.seed, 0xA0000000ull + c));
      for (std::size_t i = 0; i < chunk_len(total, c); ++i) {
        const PositBits p{static_cast<std::uint32_t>(rng.next())};
        const PositBits back = posit_encode(posit_decode(p));
        r.check(back == p, [&] { return "roundtrip(" + to_hex(p) + ") = " + to_hex(back); });
      }
      return r;
    });
    for (const auto& r : parts) s.merge(r);
    suites.push_back(std::move(s));
  }

  // Decoded values against the bitwise field reader.
  {
    SuiteResult s{"posit_decode"};
    const auto parts = parallel_map(chunks(samples), threads, [&](std::size_t c) {
      SuiteResult r;
      SplitMix64 rng(derive_seed(cfg.seed, 0xB0000000ull + c));
      for (std::size_t i = 0; i < chunk_len(samples, c); ++i) {
        const auto bits = static_cast<std::uint32_t>(rng.next());
        const auto want = oracle::posit_value(bits, 32);
        const BigFloat got = posit_to_real(PositBits{bits});
        r.check(want ? got == *want : got.is_nan(), [&] { return "decode(" + to_hex(PositBits{bits}) + ")"; });
      }
      return r;
    });
    for (const auto& r : parts) s.merge(r);
    suites.push_back(std::move(s));
  }

  return suites;
}

// Soft-float against the host FPU, counting only normal native results.
inline std::vector<SuiteResult> float_conformance(const RunConfig& cfg) {
  const std::size_t samples = conformance_samples(cfg);
  const std::size_t threads = worker_count(cfg);
  const auto chunks = conformance_chunks;
  const auto chunk_len = conformance_chunk_len;
  std::vector<SuiteResult> suites;
  for (OperatorKind op : {OperatorKind::Float32Add, OperatorKind::Float32Sub, OperatorKind::Float32Mul}) {
    SuiteResult s{std::string(operator_name(op))};
    const auto parts = parallel_map(chunks(samples), threads, [&](std::size_t c) {
      SuiteResult r;
      SplitMix64 rng(derive_seed(cfg.seed, (0xC0000000ull + static_cast<std::uint64_t>(op)) << 24 | c));
      const std::size_t want = chunk_len(samples, c);
      while (r.cases < want) {
        const FloatBits a = random_normal_float(rng, 1, 254);
        const FloatBits b = (rng.next() % 4 == 0) ? random_normal_float(rng, 1, 254) : random_normal_float(rng, 100, 154);
        const float x = native_float(a);
        const float y = native_float(b);
        const float native = op == OperatorKind::Float32Add ? x + y : op == OperatorKind::Float32Sub ? x - y : x * y;
        if (!std::isnormal(native)) continue;
        const FloatBits got = op == OperatorKind::Float32Add   ? sf32_add(a, b)
                              : op == OperatorKind::Float32Sub ? sf32_sub(a, b)
                                                               : sf32_mul(a, b);
        r.check(got == float_bits(native), [&] {
          return std::string(operator_name(op)) + "(" + to_hex(a) + ", " + to_hex(b) + ") = " + to_hex(got) +
                 ", hardware " + to_hex(float_bits(native));
        });
      }
      return r;
    });
    for (const auto& r : parts) s.merge(r);
    suites.push_back(std::move(s));
  }
  return suites;
}

inline CommandResult cmd_conformance(const RunConfig& cfg) {
  std::vector<SuiteResult> suites = posit_conformance(cfg);
  for (auto& s : float_conformance(cfg)) suites.push_back(std::move(s));
  CsvWriter csv;
  CommandResult result;
  for (const auto& s : suites) {
    csv.row("conformance", s.name, std::nullopt, cfg.seed, "cases", std::to_string(s.cases));
    csv.row("conformance", s.name, std::nullopt, cfg.seed, "failures", std::to_string(s.failures));
    if (s.failures > 0) result.exit_code = 1;
    for (const auto& e : s.examples) result.log += "FAIL " + e + "\n";
  }
  result.output = csv.str();
  return result;
}

// cost-report ------------------------------------------------------------------

inline nlohmann::ordered_json cost_report_json(const RunConfig& cfg, const graph::LatencyModel& model = {}) {
  nlohmann::ordered_json j;
  j["model"] =
      "branch-free: data-dependent branches trace both arms and merge them with select nodes; one node per "
      "primitive integer op (clz counts as one); latencies and ports are a model, not silicon";
  j["latency"] = model.latency;
  j["ports"] = model.ports;
  const bool fastmath = fastmath_or(cfg, true);
  j["fastmath"] = fastmath;
  std::map<OperatorKind, graph::GraphReport> reports;
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (OperatorKind op : kAllOperators) {
    const graph::OpGraph g = trace_operator(op, fastmath);
    reports[op] = graph::graph_report(g, model);
    ops.push_back(graph::to_json(reports[op]));
    if (!cfg.dot_dir.empty()) {
      const std::string path = cfg.dot_dir + "/" + g.name + ".dot";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << graph::to_dot(g);
    }
  }
  j["operators"] = ops;
  nlohmann::ordered_json ratios;
  const auto ratio = [](std::size_t a, std::size_t b) { return static_cast<double>(a) / static_cast<double>(b); };
  const std::pair<const char*, std::pair<OperatorKind, OperatorKind>> pairs[] = {
      {"add", {OperatorKind::PositAdd, OperatorKind::Float32Add}},
      {"sub", {OperatorKind::PositSub, OperatorKind::Float32Sub}},
      {"mul", {OperatorKind::PositMul, OperatorKind::Float32Mul}}};
  for (const auto& [name, p] : pairs) {
    const auto& posit = reports[p.first];
    const auto& flt = reports[p.second];
    ratios[name] = {{"total_nodes", ratio(posit.total_nodes, flt.total_nodes)},
                    {"height", ratio(posit.height, flt.height)},
                    {"width", ratio(posit.width, flt.width)},
                    {"est_latency_cycles", ratio(posit.est_latency_cycles, flt.est_latency_cycles)}};
  }
  j["posit_over_float32"] = ratios;
  nlohmann::ordered_json ffts = nlohmann::ordered_json::array();
  for (std::size_t n : resolve_sizes(cfg, {10})) {
    for (CostFormat f : {CostFormat::Posit32, CostFormat::Float32}) ffts.push_back(to_json(fft_cost_report(n, f, model, fastmath)));
  }
  j["fft"] = ffts;
  return j;
}

inline CommandResult cmd_cost_report(const RunConfig& cfg) { return {cost_report_json(cfg).dump(2) + "\n", 0, {}}; }

// bench ------------------------------------------------------------------------

template <RealFormat F>
double time_round_trip_ns(const F& f, const std::vector<Complex<BigFloat>>& x, std::size_t repeats) {
  using Clock = std::chrono::steady_clock;
  const auto input = to_format(f, x);
  const auto& table = *cached_twiddles(x.size(), f);
  volatile std::size_t sink = 0;
  sink = sink + fft_inverse(f, fft_forward(f, input, table), table).size();  // warm-up
  std::vector<double> ns;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    const auto out = fft_inverse(f, fft_forward(f, input, table), table);
    const auto t1 = Clock::now();
    sink = sink + out.size();
    ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  std::sort(ns.begin(), ns.end());
  return ns[ns.size() / 2];
}

inline CommandResult cmd_bench(const RunConfig& cfg) {
  auto sizes = resolve_sizes(cfg, {8, 10, 12, 14, 16});
  std::sort(sizes.begin(), sizes.end());
  auto formats = resolve_formats(cfg, {"posit32", "float32", "native32"}, {"posit32", "float32", "native32", "bigfloat"});
  if (cfg.repeats == 0) throw UsageError("repeats must be positive");
  std::sort(formats.begin(), formats.end());
  CsvWriter csv;
  // Timed one at a time so runs do not compete for cores.
  for (const auto& f : formats) {
    for (std::size_t n : sizes) {
      const auto x = accuracy_input(n, derive_seed(cfg.seed, n * 65536), cfg.dist);
      double ns = 0.0;
      if (f == "posit32") ns = time_round_trip_ns(Posit32Format{fastmath_or(cfg, false)}, x, cfg.repeats);
      if (f == "float32") ns = time_round_trip_ns(SoftFloat32Format{}, x, cfg.repeats);
      if (f == "native32") ns = time_round_trip_ns(NativeFloat32Format{}, x, cfg.repeats);
      if (f == "bigfloat") ns = time_round_trip_ns(BigFloatFormat{cfg.precision}, x, cfg.repeats);
      const std::string name = f == "bigfloat" ? "bigfloat" + std::to_string(cfg.precision) : f;
      csv.row("bench", name, n, cfg.seed, "ns_per_transform", ns);
    }
  }
  return {csv.str(), 0, {}};
}

inline CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "fft-accuracy") return cmd_fft_accuracy(cfg);
  if (cfg.command == "spectral-accuracy") return cmd_spectral_accuracy(cfg);
  if (cfg.command == "conformance") return cmd_conformance(cfg);
  if (cfg.command == "cost-report") return cmd_cost_report(cfg);
  if (cfg.command == "bench") return cmd_bench(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace positflow::harness
