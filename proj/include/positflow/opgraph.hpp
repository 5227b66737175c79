#pragma once

// Operation-graph tracing and cost model.
//
// `Traced` is a drop-in word type for the posit / soft-float kernels.  While
// a Recorder is active on the thread, each primitive integer operation on a
// non-constant operand appends one node to the graph.  Constant operands
// fold away, identical (op, operands) pairs are shared, and nodes that do not
// reach an output are dropped on finish, roughly what an optimizing compiler
// would leave.  Data-dependent branches (`when`) trace both arms and merge
// them with select nodes, so the graph is branch free and can be replayed on
// concrete inputs.
//
// Report model: the cost figures below are a documented model over this
// public primitive set, not measurements of any particular silicon.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "positflow/word.hpp"

namespace positflow::graph {

enum class Op : std::uint8_t {
  Add, Sub, Mul, Neg,
  Shl, Shr, Sar, And, Or, Xor, Not, Clz,
  Eq, Ne, Ult, Ule, Slt, Sle, Select,
  Umin, Umax, Smin, Smax,
};

enum class Category : std::uint8_t { MinMax, Arithmetic, Bitwise, SelectOther };
inline constexpr std::size_t kCategoryCount = 4;

constexpr Category category_of(Op op) {
  switch (op) {
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Neg:
      return Category::Arithmetic;
    case Op::Shl: case Op::Shr: case Op::Sar: case Op::And: case Op::Or:
    case Op::Xor: case Op::Not: case Op::Clz:
      return Category::Bitwise;
    case Op::Umin: case Op::Umax: case Op::Smin: case Op::Smax:
      return Category::MinMax;
    default:
      return Category::SelectOther;
  }
}

constexpr std::string_view op_name(Op op) {
  constexpr std::array<std::string_view, 23> names{
      "add", "sub", "mul", "neg", "shl", "shr", "sar", "and", "or", "xor", "not", "clz",
      "eq", "ne", "ult", "ule", "slt", "sle", "select", "umin", "umax", "smin", "smax"};
  return names[static_cast<std::size_t>(op)];
}

constexpr std::string_view category_name(Category c) {
  constexpr std::array<std::string_view, kCategoryCount> names{"min_max", "integer_arithmetic", "bitwise",
                                                               "select_other"};
  return names[static_cast<std::size_t>(c)];
}

constexpr int arity_of(Op op) {
  switch (op) {
    case Op::Neg: case Op::Not: case Op::Clz:
      return 1;
    case Op::Select:
      return 3;
    default:
      return 2;
  }
}

// Reference semantics: exactly the concrete Word operations.
inline Word evaluate(Op op, Word a, Word b, Word c) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Neg: return -a;
    case Op::Shl: return a << b;
    case Op::Shr: return a >> b;
    case Op::Sar: return sar(a, b);
    case Op::And: return a & b;
    case Op::Or: return a | b;
    case Op::Xor: return a ^ b;
    case Op::Not: return ~a;
    case Op::Clz: return clz(a);
    case Op::Eq: return eq(a, b);
    case Op::Ne: return ne(a, b);
    case Op::Ult: return ult(a, b);
    case Op::Ule: return ule(a, b);
    case Op::Slt: return slt(a, b);
    case Op::Sle: return sle(a, b);
    case Op::Select: return select(a, b, c);
    case Op::Umin: return umin(a, b);
    case Op::Umax: return umax(a, b);
    case Op::Smin: return smin(a, b);
    case Op::Smax: return smax(a, b);
  }
  throw std::logic_error("evaluate: unknown op");
}

struct Operand {
  enum class Kind : std::uint8_t { Node, Input, Constant };
  Kind kind = Kind::Constant;
  std::uint64_t value = 0;

  static Operand node(std::size_t id) { return {Kind::Node, id}; }
  static Operand input(std::size_t index) { return {Kind::Input, index}; }
  static Operand constant(std::uint64_t v) { return {Kind::Constant, v}; }

  friend auto operator<=>(const Operand&, const Operand&) = default;
};

struct OpNode {
  Op op = Op::Add;
  std::array<Operand, 3> inputs{};

  Category category() const { return category_of(op); }
  int arity() const { return arity_of(op); }
};

// Nodes are stored in creation order.  Graphs produced by Recorder are
// topologically ordered; hand-built graphs need not be.
struct OpGraph {
  std::string name;
  std::size_t input_count = 0;
  std::vector<OpNode> nodes;
  std::vector<Operand> outputs;

  Operand add_input() { return Operand::input(input_count++); }

  Operand add_node(Op op, std::initializer_list<Operand> args) {
    if (static_cast<int>(args.size()) != arity_of(op)) throw std::invalid_argument("add_node: wrong arity");
    OpNode n{op, {}};
    std::copy(args.begin(), args.end(), n.inputs.begin());
    nodes.push_back(n);
    return Operand::node(nodes.size() - 1);
  }

  std::array<std::size_t, kCategoryCount> category_counts() const {
    std::array<std::size_t, kCategoryCount> counts{};
    for (const auto& n : nodes) ++counts[static_cast<std::size_t>(n.category())];
    return counts;
  }
};

// Node ids in dependency order; throws if the graph has a cycle.
inline std::vector<std::size_t> topological_order(const OpGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> users(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = g.nodes[i];
    for (int a = 0; a < node.arity(); ++a) {
      const Operand& in = node.inputs[a];
      if (in.kind != Operand::Kind::Node) continue;
      if (in.value >= n) throw std::invalid_argument("opgraph: dangling node reference");
      ++pending[i];
      users[in.value].push_back(i);
    }
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) order.push_back(i);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t u : users[order[head]]) {
      if (--pending[u] == 0) order.push_back(u);
    }
  }
  if (order.size() != n) throw std::invalid_argument("opgraph: cycle detected");
  return order;
}

inline std::vector<Word> replay(const OpGraph& g, std::span<const Word> inputs) {
  if (inputs.size() != g.input_count) throw std::invalid_argument("replay: wrong number of inputs");
  std::vector<Word> values(g.nodes.size());
  const auto read = [&](const Operand& o) -> Word {
    switch (o.kind) {
      case Operand::Kind::Node: return values[o.value];
      case Operand::Kind::Input: return inputs[o.value];
      case Operand::Kind::Constant: return o.value;
    }
    return 0;
  };
  for (std::size_t id : topological_order(g)) {
    const auto& n = g.nodes[id];
    values[id] = evaluate(n.op, read(n.inputs[0]), read(n.inputs[1]), read(n.inputs[2]));
  }
  std::vector<Word> out;
  out.reserve(g.outputs.size());
  for (const auto& o : g.outputs) out.push_back(read(o));
  return out;
}

class Recorder;

namespace detail {
inline thread_local Recorder* active_recorder = nullptr;
}

// Word type whose operations are recorded by the thread's active Recorder.
struct Traced {
  Operand ref;

  Traced() = default;
  Traced(std::uint64_t constant) : ref(Operand::constant(constant)) {}  // NOLINT: mirrors Word
  explicit Traced(Operand o) : ref(o) {}

  bool is_constant() const { return ref.kind == Operand::Kind::Constant; }
};

class Recorder {
 public:
  explicit Recorder(std::string name) : previous_(detail::active_recorder) {
    graph_.name = std::move(name);
    detail::active_recorder = this;
  }
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;
  ~Recorder() { detail::active_recorder = previous_; }

  static Recorder& active() {
    if (detail::active_recorder == nullptr) throw std::logic_error("Traced operation without an active Recorder");
    return *detail::active_recorder;
  }

  Traced input() { return Traced(graph_.add_input()); }
  void output(const Traced& t) { graph_.outputs.push_back(t.ref); }

  Traced apply(Op op, Traced a, Traced b = Traced(0), Traced c = Traced(0)) {
    const int arity = arity_of(op);
    if (a.is_constant() && (arity < 2 || b.is_constant()) && (arity < 3 || c.is_constant())) {
      return Traced(evaluate(op, a.ref.value, b.ref.value, c.ref.value).v);
    }
    const std::array<Operand, 3> args{a.ref, arity >= 2 ? b.ref : Operand{}, arity >= 3 ? c.ref : Operand{}};
    const auto key = std::pair{op, args};
    if (auto it = interned_.find(key); it != interned_.end()) return Traced(Operand::node(it->second));
    graph_.nodes.push_back(OpNode{op, args});
    const std::size_t id = graph_.nodes.size() - 1;
    interned_.emplace(key, id);
    return Traced(Operand::node(id));
  }

  // Drops nodes that no output depends on and renumbers the rest.
  OpGraph finish() {
    const std::size_t n = graph_.nodes.size();
    std::vector<bool> live(n, false);
    for (const auto& o : graph_.outputs) {
      if (o.kind == Operand::Kind::Node) live[o.value] = true;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (!live[i]) continue;
      const auto& node = graph_.nodes[i];
      for (int a = 0; a < node.arity(); ++a) {
        if (node.inputs[a].kind == Operand::Kind::Node) live[node.inputs[a].value] = true;
      }
    }
    std::vector<std::size_t> renumber(n, 0);
    OpGraph out;
    out.name = graph_.name;
    out.input_count = graph_.input_count;
    const auto remap = [&](Operand o) {
      if (o.kind == Operand::Kind::Node) o.value = renumber[o.value];
      return o;
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (!live[i]) continue;
      OpNode node = graph_.nodes[i];
      for (auto& in : node.inputs) in = remap(in);
      renumber[i] = out.nodes.size();
      out.nodes.push_back(node);
    }
    for (const auto& o : graph_.outputs) out.outputs.push_back(remap(o));
    return out;
  }

 private:
  OpGraph graph_;
  std::map<std::pair<Op, std::array<Operand, 3>>, std::size_t> interned_;
  Recorder* previous_;
};

inline Traced record(Op op, Traced a, Traced b = Traced(0), Traced c = Traced(0)) {
  if (a.is_constant() && (arity_of(op) < 2 || b.is_constant()) && (arity_of(op) < 3 || c.is_constant())) {
    return Traced(evaluate(op, a.ref.value, b.ref.value, c.ref.value).v);
  }
  return Recorder::active().apply(op, a, b, c);
}

inline Traced operator+(Traced a, Traced b) { return record(Op::Add, a, b); }
inline Traced operator-(Traced a, Traced b) { return record(Op::Sub, a, b); }
inline Traced operator*(Traced a, Traced b) { return record(Op::Mul, a, b); }
inline Traced operator-(Traced a) { return record(Op::Neg, a); }
inline Traced operator&(Traced a, Traced b) { return record(Op::And, a, b); }
inline Traced operator|(Traced a, Traced b) { return record(Op::Or, a, b); }
inline Traced operator^(Traced a, Traced b) { return record(Op::Xor, a, b); }
inline Traced operator~(Traced a) { return record(Op::Not, a); }
inline Traced operator<<(Traced a, Traced s) { return record(Op::Shl, a, s); }
inline Traced operator>>(Traced a, Traced s) { return record(Op::Shr, a, s); }
inline Traced sar(Traced a, Traced s) { return record(Op::Sar, a, s); }
inline Traced eq(Traced a, Traced b) { return record(Op::Eq, a, b); }
inline Traced ne(Traced a, Traced b) { return record(Op::Ne, a, b); }
inline Traced ult(Traced a, Traced b) { return record(Op::Ult, a, b); }
inline Traced ule(Traced a, Traced b) { return record(Op::Ule, a, b); }
inline Traced slt(Traced a, Traced b) { return record(Op::Slt, a, b); }
inline Traced sle(Traced a, Traced b) { return record(Op::Sle, a, b); }
inline Traced clz(Traced a) { return record(Op::Clz, a); }
inline Traced umin(Traced a, Traced b) { return record(Op::Umin, a, b); }
inline Traced umax(Traced a, Traced b) { return record(Op::Umax, a, b); }
inline Traced smin(Traced a, Traced b) { return record(Op::Smin, a, b); }
inline Traced smax(Traced a, Traced b) { return record(Op::Smax, a, b); }

inline Traced select(Traced c, Traced a, Traced b) {
  if (c.is_constant()) return c.ref.value != 0 ? a : b;
  if (a.ref == b.ref) return a;
  return record(Op::Select, c, a, b);
}

inline Traced merge(Traced c, Traced a, Traced b) { return select(c, a, b); }

template <class... T, std::size_t... I>
std::tuple<T...> merge_tuple(Traced c, const std::tuple<T...>& a, const std::tuple<T...>& b,
                             std::index_sequence<I...>) {
  return {merge(c, std::get<I>(a), std::get<I>(b))...};
}

template <class... T>
std::tuple<T...> merge(Traced c, const std::tuple<T...>& a, const std::tuple<T...>& b) {
  return merge_tuple(c, a, b, std::index_sequence_for<T...>{});
}

// Branch on a traced condition: both arms are traced, results are merged.
template <class Then, class Else>
auto when(Traced c, Then&& then_arm, Else&& else_arm) {
  if (c.is_constant()) return c.ref.value != 0 ? then_arm() : else_arm();
  auto a = then_arm();
  auto b = else_arm();
  return merge(c, a, b);
}

// Cost model ------------------------------------------------------------------

struct LatencyModel {
  std::array<int, kCategoryCount> latency{1, 1, 1, 1};
  std::array<int, kCategoryCount> ports{4, 4, 4, 4};
};

struct GraphReport {
  std::string name;
  std::size_t total_nodes = 0;
  std::array<std::size_t, kCategoryCount> per_category{};
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t est_latency_cycles = 0;
  std::size_t est_reciprocal_throughput = 0;
  std::vector<std::size_t> level_occupancy;
};

// height: longest dependency chain in nodes; width: most nodes sharing a
// depth; latency: critical path under the per-category latencies;
// reciprocal throughput: the busiest (depth, category) slot divided by the
// ports available to that category, rounded up.
inline GraphReport graph_report(const OpGraph& g, const LatencyModel& model = {}) {
  const auto order = topological_order(g);
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::size_t> finish(n, 0);
  GraphReport r;
  r.name = g.name;
  r.total_nodes = n;
  r.per_category = g.category_counts();
  for (std::size_t id : order) {
    const auto& node = g.nodes[id];
    std::size_t d = 0;
    std::size_t start = 0;
    for (int a = 0; a < node.arity(); ++a) {
      const Operand& in = node.inputs[a];
      if (in.kind != Operand::Kind::Node) continue;
      d = std::max(d, depth[in.value]);
      start = std::max(start, finish[in.value]);
    }
    depth[id] = d + 1;
    finish[id] = start + static_cast<std::size_t>(model.latency[static_cast<std::size_t>(node.category())]);
    r.height = std::max(r.height, depth[id]);
    r.est_latency_cycles = std::max(r.est_latency_cycles, finish[id]);
  }
  r.level_occupancy.assign(r.height, 0);
  std::vector<std::array<std::size_t, kCategoryCount>> per_level(r.height);
  for (std::size_t id = 0; id < n; ++id) {
    ++r.level_occupancy[depth[id] - 1];
    ++per_level[depth[id] - 1][static_cast<std::size_t>(g.nodes[id].category())];
  }
  for (std::size_t lvl = 0; lvl < r.height; ++lvl) {
    r.width = std::max(r.width, r.level_occupancy[lvl]);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      const auto ports = static_cast<std::size_t>(std::max(1, model.ports[c]));
      r.est_reciprocal_throughput = std::max(r.est_reciprocal_throughput, (per_level[lvl][c] + ports - 1) / ports);
    }
  }
  return r;
}

inline nlohmann::ordered_json to_json(const GraphReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["total_nodes"] = r.total_nodes;
  nlohmann::ordered_json cats;
  for (std::size_t c = 0; c < kCategoryCount; ++c) cats[std::string(category_name(static_cast<Category>(c)))] = r.per_category[c];
  j["per_category"] = cats;
  j["height"] = r.height;
  j["width"] = r.width;
  j["est_latency_cycles"] = r.est_latency_cycles;
  j["est_reciprocal_throughput"] = r.est_reciprocal_throughput;
  j["level_occupancy"] = r.level_occupancy;
  return j;
}

inline std::string to_dot(const OpGraph& g) {
  std::ostringstream out;
  out << "digraph \"" << g.name << "\" {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < g.input_count; ++i) out << "  in" << i << " [shape=diamond,label=\"in" << i << "\"];\n";
  const auto name_of = [](const Operand& o) {
    switch (o.kind) {
      case Operand::Kind::Node: return "n" + std::to_string(o.value);
      case Operand::Kind::Input: return "in" + std::to_string(o.value);
      case Operand::Kind::Constant: break;
    }
    return std::string();
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& node = g.nodes[i];
    out << "  n" << i << " [shape=box,label=\"" << op_name(node.op);
    for (int a = 0; a < node.arity(); ++a) {
      if (node.inputs[a].kind == Operand::Kind::Constant) {
        out << " #0x" << std::hex << node.inputs[a].value << std::dec;
      }
    }
    out << "\",group=" << category_name(node.category()) << "];\n";
    for (int a = 0; a < node.arity(); ++a) {
      if (node.inputs[a].kind != Operand::Kind::Constant) out << "  " << name_of(node.inputs[a]) << " -> n" << i << ";\n";
    }
  }
  for (std::size_t i = 0; i < g.outputs.size(); ++i) {
    out << "  out" << i << " [shape=oval];\n";
    if (g.outputs[i].kind != Operand::Kind::Constant) out << "  " << name_of(g.outputs[i]) << " -> out" << i << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace positflow::graph
