#pragma once

#include "solsem/numeric.hpp"
#include "solsem/types.hpp"

#include <span>

namespace solsem {

/// Slot alignment in bytes; fixed for the whole engine.
inline constexpr std::uint64_t kAlign = 32;

/// Number of bytes a value of `t` occupies, with packing and padding applied.
/// Complex types (arrays, structs) are always a whole number of slots;
/// dynamic arrays, strings, mappings and refs occupy exactly one slot.
std::uint64_t size_of(const SemType& t, RuleLog* log = nullptr);

/// Folds `fields` starting at byte offset `start`: primitives pack into the
/// current slot when they fit, complex fields start on a fresh slot. Returns
/// the offset just past the last field.
ByteAddr size_packed(const ByteAddr& start, std::span<const TypePtr> fields, RuleLog* log = nullptr);

/// First byte a value of `t` may occupy at or after `addr`. A primitive stays
/// put when it fits before the next slot boundary; anything else moves to the
/// next multiple of the slot size.
ByteAddr align_up(const ByteAddr& addr, const SemType& t, RuleLog* log = nullptr);

/// align_up(addr, t) + size_of(t).
ByteAddr bump(const ByteAddr& addr, const SemType& t, RuleLog* log = nullptr);

/// Packed byte offset of field `k` inside struct `s`.
std::uint64_t field_offset(const SemType& s, std::size_t k, RuleLog* log = nullptr);

inline ByteAddr next_boundary(const ByteAddr& a) { return (a / kAlign + 1) * kAlign; }

inline ByteAddr round_up(const ByteAddr& a) { return (a + kAlign - 1) / kAlign * kAlign; }

}  // namespace solsem
