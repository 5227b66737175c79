#pragma once

// Concrete 64-bit integer word used by the format kernels.
//
// The posit and soft-float operators are written once as templates over a
// word type.  `Word` executes them directly; `graph::Traced` (opgraph.hpp)
// records them as an operation graph.  Both must expose exactly the same
// primitive set, and `Word` is the reference semantics for that set:
//
//   * arithmetic wraps modulo 2^64
//   * shift amounts are read as unsigned; amounts >= 64 give 0 for shl/shr
//     and a sign fill for sar
//   * comparisons return 0 or 1
//   * clz(0) == 64

#include <bit>
#include <cstdint>
#include <tuple>
#include <utility>

namespace positflow {

struct Word {
  std::uint64_t v = 0;

  constexpr Word() = default;
  constexpr Word(std::uint64_t x) : v(x) {}  // NOLINT: literals mix freely in kernels

  friend constexpr bool operator==(Word, Word) = default;
};

constexpr Word operator+(Word a, Word b) { return a.v + b.v; }
constexpr Word operator-(Word a, Word b) { return a.v - b.v; }
constexpr Word operator*(Word a, Word b) { return a.v * b.v; }
constexpr Word operator-(Word a) { return std::uint64_t{0} - a.v; }
constexpr Word operator&(Word a, Word b) { return a.v & b.v; }
constexpr Word operator|(Word a, Word b) { return a.v | b.v; }
constexpr Word operator^(Word a, Word b) { return a.v ^ b.v; }
constexpr Word operator~(Word a) { return ~a.v; }

constexpr Word operator<<(Word a, Word s) { return s.v >= 64 ? 0 : a.v << s.v; }
constexpr Word operator>>(Word a, Word s) { return s.v >= 64 ? 0 : a.v >> s.v; }

constexpr Word sar(Word a, Word s) {
  const auto x = static_cast<std::int64_t>(a.v);
  return static_cast<std::uint64_t>(s.v >= 64 ? (x < 0 ? -1 : 0) : x >> s.v);
}

constexpr Word eq(Word a, Word b) { return a.v == b.v; }
constexpr Word ne(Word a, Word b) { return a.v != b.v; }
constexpr Word ult(Word a, Word b) { return a.v < b.v; }
constexpr Word ule(Word a, Word b) { return a.v <= b.v; }
constexpr Word slt(Word a, Word b) {
  return static_cast<std::int64_t>(a.v) < static_cast<std::int64_t>(b.v);
}
constexpr Word sle(Word a, Word b) {
  return static_cast<std::int64_t>(a.v) <= static_cast<std::int64_t>(b.v);
}

constexpr Word clz(Word a) { return static_cast<std::uint64_t>(std::countl_zero(a.v)); }

constexpr Word select(Word c, Word a, Word b) { return c.v != 0 ? a : b; }

constexpr Word umin(Word a, Word b) { return a.v < b.v ? a : b; }
constexpr Word umax(Word a, Word b) { return a.v < b.v ? b : a; }
constexpr Word smin(Word a, Word b) { return slt(a, b).v ? a : b; }
constexpr Word smax(Word a, Word b) { return slt(a, b).v ? b : a; }

// Data-dependent branch.  Concrete words take one arm; traced words take
// both and merge with select nodes.
template <class Then, class Else>
constexpr auto when(Word c, Then&& then_arm, Else&& else_arm) {
  return c.v != 0 ? std::forward<Then>(then_arm)() : std::forward<Else>(else_arm)();
}

constexpr std::int64_t as_signed(Word w) { return static_cast<std::int64_t>(w.v); }

}  // namespace positflow
