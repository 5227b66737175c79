// positflow: accuracy sweeps, conformance suites, cost reports and
// benchmarks for posit32 versus float32.
//
// Exit codes: 0 success, 1 conformance failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "positflow/harness.hpp"

namespace {

constexpr int kExitUsage = 2;

int emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "positflow: cannot write " << path << "\n";
    return kExitUsage;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using positflow::harness::RunConfig;
  RunConfig cfg;
  std::string out_path;
  std::string dist = "truncnormal";

  CLI::App app{"posit32 vs float32 FFT, spectral and cost experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; flags on the command line win");

  app.add_option("--sizes", cfg.sizes, "FFT sizes as powers of two, e.g. 8,10,12")->delimiter(',');
  app.add_option("--formats", cfg.formats, "posit32, float32, native32, bigfloat")->delimiter(',');
  app.add_option("--seed", cfg.seed, "64-bit RNG seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "inputs per size, or random pairs per conformance suite");
  app.add_option("--precision", cfg.precision, "BigFloat precision in bits")->capture_default_str()->check(CLI::Range(16, 992));
  app.add_flag("--fastmath,!--no-fastmath", cfg.fastmath,
               "posit kernels without NaR handling (default: on for cost-report, off otherwise)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--dist", dist, "input distribution")->check(CLI::IsMember({"truncnormal", "uniform"}))->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads (default: all cores)");
  app.add_option("--steps", cfg.steps, "spectral time steps")->capture_default_str();
  app.add_option("--d", cfg.d, "spectral grid constant d")->capture_default_str();
  app.add_option("--c", cfg.c, "wave speed")->capture_default_str();
  app.add_option("--dt-factor", cfg.dt_factor, "time step as a fraction of dx")->capture_default_str();
  app.add_option("--snapshots", cfg.snapshot_path, "CSV file for spectral field snapshots");
  app.add_option("--snapshot-every", cfg.snapshot_every, "steps between snapshots")->capture_default_str();
  app.add_option("--roundtrip", cfg.roundtrip_samples, "patterns for the posit round-trip suite")->capture_default_str();
  app.add_option("--repeats", cfg.repeats, "timed repeats per bench point (median reported)")->capture_default_str();
  app.add_option("--dot-dir", cfg.dot_dir, "directory for per-operator DOT graphs");

  for (const char* name : {"fft-accuracy", "spectral-accuracy", "conformance", "cost-report", "bench"}) {
    app.add_subcommand(name, "")->callback([&cfg, name] { cfg.command = name; });
  }
  app.get_subcommand("fft-accuracy")->description("FFT then IFFT round-trip error per format and size");
  app.get_subcommand("spectral-accuracy")->description("1D spectral wave error against a BigFloat reference");
  app.get_subcommand("conformance")->description("kernels against the correctly rounded oracle and the FPU");
  app.get_subcommand("cost-report")->description("traced operation graphs as JSON");
  app.get_subcommand("bench")->description("wall-clock FFT+IFFT timing, median of repeats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  cfg.dist = dist == "uniform" ? positflow::InputDistribution::Uniform : positflow::InputDistribution::TruncatedNormal;

  for (int e : cfg.sizes) {
    if (e >= positflow::harness::kLongRunningExponent && e <= positflow::harness::kMaxSizeExponent) {
      std::cerr << "positflow: size 2^" << e << " is long-running\n";
    }
  }

  try {
    const auto result = positflow::harness::run_command(cfg);
    std::cerr << result.log;
    if (const int rc = emit(result.output, out_path); rc != 0) return rc;
    return result.exit_code;
  } catch (const positflow::harness::UsageError& e) {
    std::cerr << "positflow: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "positflow: " << e.what() << "\n";
    return kExitUsage;
  }
}
