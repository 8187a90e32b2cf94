#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace deptx {

/// The 14 binary string operations an edgewise transformation can assign.
enum class Operation : std::uint8_t {
  kConcat,
  kRev,
  kConcatRel,
  kRevlRel,
  kBracket,
  kBrInvert,
  kBracket2,
  kBracket2Inv,
  kBracket3,
  kBracket4,
  kBracket5,
  kTriple,
  kTripleInv,
  kIgnoreDep,
};

inline constexpr std::array<Operation, 14> kAllOperations = {
    Operation::kConcat,    Operation::kRev,        Operation::kConcatRel, Operation::kRevlRel,
    Operation::kBracket,   Operation::kBrInvert,   Operation::kBracket2,  Operation::kBracket2Inv,
    Operation::kBracket3,  Operation::kBracket4,   Operation::kBracket5,  Operation::kTriple,
    Operation::kTripleInv, Operation::kIgnoreDep,
};

inline constexpr std::string_view name(Operation op) {
  switch (op) {
    case Operation::kConcat: return "concat";
    case Operation::kRev: return "rev";
    case Operation::kConcatRel: return "concat-rel";
    case Operation::kRevlRel: return "revl-rel";
    case Operation::kBracket: return "bracket";
    case Operation::kBrInvert: return "br-invert";
    case Operation::kBracket2: return "bracket-2";
    case Operation::kBracket2Inv: return "bracket-2-inv";
    case Operation::kBracket3: return "bracket-3";
    case Operation::kBracket4: return "bracket-4";
    case Operation::kBracket5: return "bracket-5";
    case Operation::kTriple: return "triple";
    case Operation::kTripleInv: return "triple-inv";
    case Operation::kIgnoreDep: return "ignore-dep";
  }
  return "?";
}

inline constexpr std::optional<Operation> parse_operation(std::string_view text) {
  for (auto op : kAllOperations)
    if (name(op) == text) return op;
  return std::nullopt;
}

/// Position of a bracket-5 argument among the bracket-5 arguments of its head.
enum class Bracket5Pos : std::uint8_t { kNone, kOnly, kFirst, kMiddle, kLast };

/// Template symbols. kLeft/kRight read the binary tree's linear children,
/// kHead/kDep read the head-side flag.
enum class Slot : std::uint8_t {
  kLeft,
  kRight,
  kHead,
  kDep,
  kLabel,
  kHeadLemma,
  kDepLemma,
  kOpen,   // "("
  kClose,  // ")"
  kComma,  // ","
  kBy,     // "by"
};

namespace detail {
using enum Slot;
inline constexpr Slot kConcatT[] = {kLeft, kRight};
inline constexpr Slot kRevT[] = {kRight, kLeft};
inline constexpr Slot kConcatRelT[] = {kLeft, kLabel, kRight};
inline constexpr Slot kRevlRelT[] = {kRight, kLabel, kLeft};
inline constexpr Slot kBracketT[] = {kHead, kOpen, kLabel, kDep, kClose};
inline constexpr Slot kBrInvertT[] = {kDep, kOpen, kLabel, kBy, kHead, kClose};
inline constexpr Slot kBracket2T[] = {kOpen, kHead, kLabel, kDep, kClose};
inline constexpr Slot kBracket2InvT[] = {kOpen, kDep, kLabel, kHead, kClose};
inline constexpr Slot kBracket3T[] = {kHead, kOpen, kDep, kClose};
inline constexpr Slot kBracket4T[] = {kHead, kLabel, kOpen, kDep, kClose};
inline constexpr Slot kBracket5FirstT[] = {kHead, kOpen, kLabel, kDep};
inline constexpr Slot kBracket5MiddleT[] = {kHead, kComma, kLabel, kDep};
inline constexpr Slot kBracket5LastT[] = {kHead, kComma, kLabel, kDep, kClose};
inline constexpr Slot kTripleT[] = {kHead, kOpen, kHeadLemma, kLabel, kDepLemma, kClose, kDep};
inline constexpr Slot kTripleInvT[] = {kHead, kOpen, kDepLemma, kLabel, kBy, kHeadLemma, kClose, kDep};
inline constexpr Slot kIgnoreDepT[] = {kHead};
}  // namespace detail

/// Output template of an operation. `pos` only matters for bracket-5; a
/// bracket-5 node without a position behaves like the single-argument case.
inline constexpr std::span<const Slot> output_template(Operation op,
                                                       Bracket5Pos pos = Bracket5Pos::kNone) {
  switch (op) {
    case Operation::kConcat: return detail::kConcatT;
    case Operation::kRev: return detail::kRevT;
    case Operation::kConcatRel: return detail::kConcatRelT;
    case Operation::kRevlRel: return detail::kRevlRelT;
    case Operation::kBracket: return detail::kBracketT;
    case Operation::kBrInvert: return detail::kBrInvertT;
    case Operation::kBracket2: return detail::kBracket2T;
    case Operation::kBracket2Inv: return detail::kBracket2InvT;
    case Operation::kBracket3: return detail::kBracket3T;
    case Operation::kBracket4: return detail::kBracket4T;
    case Operation::kBracket5:
      switch (pos) {
        case Bracket5Pos::kFirst: return detail::kBracket5FirstT;
        case Bracket5Pos::kMiddle: return detail::kBracket5MiddleT;
        case Bracket5Pos::kLast: return detail::kBracket5LastT;
        default: return detail::kBracketT;
      }
    case Operation::kTriple: return detail::kTripleT;
    case Operation::kTripleInv: return detail::kTripleInvT;
    case Operation::kIgnoreDep: return detail::kIgnoreDepT;
  }
  return detail::kConcatT;
}

}  // namespace deptx
