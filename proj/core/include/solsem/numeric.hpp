#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace solsem {

/// A 256-bit machine word. All primitive R-values live in this domain.
using Word = boost::multiprecision::uint256_t;

/// Unbounded integer used for literals before range checking.
using BigInt = boost::multiprecision::cpp_int;

/// Byte address in storage or memory. Slot numbers are 256-bit, so a byte
/// address (slot * 32 + offset) needs a few more bits than a Word.
using ByteAddr = boost::multiprecision::uint512_t;

using Bytes = std::vector<std::uint8_t>;
using Bytes32 = std::array<std::uint8_t, 32>;

/// Account / instance address. Stored as a Word with the upper 96 bits zero.
using Address = Word;

inline constexpr unsigned kSlotBytes = 32;

/// Big-endian 32-byte encoding of a word.
Bytes32 to_bytes32(const Word& w);
Word from_bytes32(const Bytes32& b);

/// Big-endian decode of up to 32 bytes.
Word from_be(const std::uint8_t* data, std::size_t n);

std::string to_hex(const std::uint8_t* data, std::size_t n);
inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
inline std::string to_hex(const Bytes32& b) { return to_hex(b.data(), b.size()); }

/// "0x" followed by the minimal lowercase hex digits ("0x0" for zero).
std::string hex_number(const ByteAddr& v);
inline std::string hex_number(const Word& v) { return hex_number(ByteAddr{v}); }

/// 20-byte "0x…" rendering of an address.
std::string hex_address(const Address& a);

std::string decimal(const Word& v);

/// Parses "0x…" hex or decimal text. Throws std::invalid_argument.
BigInt parse_integer(const std::string& text);

inline Word mask_bits(unsigned bits) {
    if (bits >= 256) return ~Word{0};
    return (Word{1} << bits) - 1;
}

inline ByteAddr slot_to_addr(const Word& slot) { return ByteAddr{slot} * kSlotBytes; }

}  // namespace solsem
