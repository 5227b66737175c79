#pragma once

// Operator and FFT cost reports built from traced kernels.

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "positflow/fft.hpp"
#include "positflow/opgraph.hpp"
#include "positflow/posit.hpp"
#include "positflow/softfloat.hpp"

namespace positflow {

enum class OperatorKind { PositAdd, PositSub, PositMul, Float32Add, Float32Sub, Float32Mul };

inline constexpr OperatorKind kAllOperators[] = {OperatorKind::PositAdd,   OperatorKind::PositSub,
                                                 OperatorKind::PositMul,   OperatorKind::Float32Add,
                                                 OperatorKind::Float32Sub, OperatorKind::Float32Mul};

inline std::string_view operator_name(OperatorKind op) {
  switch (op) {
    case OperatorKind::PositAdd: return "posit_add";
    case OperatorKind::PositSub: return "posit_sub";
    case OperatorKind::PositMul: return "posit_mul";
    case OperatorKind::Float32Add: return "sf32_add";
    case OperatorKind::Float32Sub: return "sf32_sub";
    case OperatorKind::Float32Mul: return "sf32_mul";
  }
  return "?";
}

// Kernel dispatch shared by tracing and direct evaluation.
template <class W>
W apply_operator(OperatorKind op, W a, W b, bool fastmath) {
  switch (op) {
    case OperatorKind::PositAdd: return posit_kernel::add(a, b, fastmath);
    case OperatorKind::PositSub: return posit_kernel::sub(a, b, fastmath);
    case OperatorKind::PositMul: return posit_kernel::mul(a, b, fastmath);
    case OperatorKind::Float32Add: return float_kernel::add(a, b);
    case OperatorKind::Float32Sub: return float_kernel::sub(a, b);
    case OperatorKind::Float32Mul: return float_kernel::mul(a, b);
  }
  throw std::invalid_argument("apply_operator: unknown operator");
}

// Two inputs (operand bit patterns), one output.  `fastmath` removes the
// NaR paths of the posit operators; it has no effect on the float ones,
// which never handle exceptional values.
inline graph::OpGraph trace_operator(OperatorKind op, bool fastmath) {
  graph::Recorder rec(std::string(operator_name(op)) + (fastmath ? "" : "+nar"));
  const graph::Traced a = rec.input();
  const graph::Traced b = rec.input();
  rec.output(apply_operator(op, a, b, fastmath));
  return rec.finish();
}

// Scalar formats over traced words, for tracing whole butterflies.
struct TracedPosit32Format {
  using Scalar = graph::Traced;
  bool fastmath = true;
  Scalar add(Scalar a, Scalar b) const { return posit_kernel::add(a, b, fastmath); }
  Scalar sub(Scalar a, Scalar b) const { return posit_kernel::sub(a, b, fastmath); }
  Scalar mul(Scalar a, Scalar b) const { return posit_kernel::mul(a, b, fastmath); }
};

struct TracedFloat32Format {
  using Scalar = graph::Traced;
  Scalar add(Scalar a, Scalar b) const { return float_kernel::add(a, b); }
  Scalar sub(Scalar a, Scalar b) const { return float_kernel::sub(a, b); }
  Scalar mul(Scalar a, Scalar b) const { return float_kernel::mul(a, b); }
};

enum class CostFormat { Posit32, Float32 };

inline std::string_view cost_format_name(CostFormat f) { return f == CostFormat::Posit32 ? "posit32" : "float32"; }

namespace detail {

template <class F>
graph::OpGraph trace_radix4(const F& f, std::string name) {
  graph::Recorder rec(std::move(name));
  std::array<Complex<graph::Traced>, 7> in;
  for (auto& c : in) c = {rec.input(), rec.input()};
  // Outputs 0..3; inputs a b c d then twiddles w1 w2 w3.
  const auto y = radix4_butterfly(f, in[0], in[1], in[2], in[3], in[4], in[5], in[6], false);
  for (const auto& c : y) {
    rec.output(c.re);
    rec.output(c.im);
  }
  return rec.finish();
}

template <class F>
graph::OpGraph trace_radix2(const F& f, std::string name) {
  graph::Recorder rec(std::move(name));
  const Complex<graph::Traced> a{rec.input(), rec.input()};
  const Complex<graph::Traced> b{rec.input(), rec.input()};
  const auto y = radix2_butterfly(f, a, b);
  for (const auto& c : y) {
    rec.output(c.re);
    rec.output(c.im);
  }
  return rec.finish();
}

}  // namespace detail

inline graph::OpGraph trace_butterfly(CostFormat format, bool fastmath = true) {
  if (format == CostFormat::Posit32) return detail::trace_radix4(TracedPosit32Format{fastmath}, "radix4_posit32");
  return detail::trace_radix4(TracedFloat32Format{}, "radix4_float32");
}

inline graph::OpGraph trace_radix2_butterfly(CostFormat format, bool fastmath = true) {
  if (format == CostFormat::Posit32) return detail::trace_radix2(TracedPosit32Format{fastmath}, "radix2_posit32");
  return detail::trace_radix2(TracedFloat32Format{}, "radix2_float32");
}

// Whole-transform estimate composed from the traced butterfly.  Butterflies
// in one stage are independent; stages run back to back.  The throughput
// figure is for the butterfly DAG as a pipelined loop body, one butterfly
// entering per `butterfly.est_reciprocal_throughput` cycles.
struct FftCostReport {
  std::size_t n = 0;
  CostFormat format = CostFormat::Posit32;
  std::size_t radix4_stages = 0;
  std::size_t radix2_stages = 0;
  graph::GraphReport butterfly;
  graph::GraphReport radix2;
  graph::GraphReport total;
  std::size_t est_pipelined_cycles = 0;
};

inline FftCostReport fft_cost_report(std::size_t n, CostFormat format, const graph::LatencyModel& model = {},
                                     bool fastmath = true) {
  require_fft_size(n);
  FftCostReport r;
  r.n = n;
  r.format = format;
  const auto log2n = static_cast<std::size_t>(std::countr_zero(n));
  r.radix4_stages = log2n / 2;
  r.radix2_stages = log2n % 2;
  r.butterfly = graph::graph_report(trace_butterfly(format, fastmath), model);
  r.radix2 = graph::graph_report(trace_radix2_butterfly(format, fastmath), model);

  const std::size_t per4 = r.radix4_stages * (n / 4);
  const std::size_t per2 = r.radix2_stages * (n / 2);
  auto& t = r.total;
  t.name = "fft_" + std::string(cost_format_name(format)) + "_" + std::to_string(n);
  t.total_nodes = per4 * r.butterfly.total_nodes + per2 * r.radix2.total_nodes;
  for (std::size_t c = 0; c < graph::kCategoryCount; ++c) {
    t.per_category[c] = per4 * r.butterfly.per_category[c] + per2 * r.radix2.per_category[c];
  }
  t.height = r.radix4_stages * r.butterfly.height + r.radix2_stages * r.radix2.height;
  t.width = std::max(r.radix4_stages ? (n / 4) * r.butterfly.width : 0, r.radix2_stages ? (n / 2) * r.radix2.width : 0);
  t.est_latency_cycles = r.radix4_stages * r.butterfly.est_latency_cycles + r.radix2_stages * r.radix2.est_latency_cycles;
  t.est_reciprocal_throughput = r.butterfly.est_reciprocal_throughput;
  const std::size_t launches = r.radix4_stages * (n / 4);
  r.est_pipelined_cycles = r.butterfly.est_latency_cycles * r.radix4_stages +
                           (launches > 0 ? (launches - 1) * r.butterfly.est_reciprocal_throughput : 0) +
                           r.radix2_stages * (r.radix2.est_latency_cycles + (n / 2 - 1) * r.radix2.est_reciprocal_throughput);
  return r;
}

inline nlohmann::ordered_json to_json(const FftCostReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["format"] = cost_format_name(r.format);
  j["radix4_stages"] = r.radix4_stages;
  j["radix2_stages"] = r.radix2_stages;
  j["butterfly"] = graph::to_json(r.butterfly);
  j["total"] = graph::to_json(r.total);
  j["est_pipelined_cycles"] = r.est_pipelined_cycles;
  return j;
}

}  // namespace positflow
