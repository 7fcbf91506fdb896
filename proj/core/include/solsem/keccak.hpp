#pragma once

#include "solsem/numeric.hpp"

#include <span>

namespace solsem {

/// Keccak-256 with the original (pre-FIPS) 0x01 domain padding, as used by
/// the EVM for storage slot derivation.
Bytes32 keccak256(std::span<const std::uint8_t> data);

/// Slot of element `index` of a dynamic array whose base slot is `base`:
/// keccak256(bytes32(base)) + index, wrapping modulo 2^256.
Word slot_of_dyn(const Word& base, const Word& index);

/// Order of the two 32-byte words hashed for a mapping entry.
enum class MapHashOrder {
    BaseThenKey,  ///< keccak256(bytes32(base) . bytes32(key))
    KeyThenBase,  ///< keccak256(bytes32(key) . bytes32(base)), what solc emits
};

Word slot_of_map(const Word& base, const Bytes32& key, MapHashOrder order = MapHashOrder::BaseThenKey);

}  // namespace solsem
