#include "solsem/numeric.hpp"

#include <stdexcept>

namespace solsem {

Bytes32 to_bytes32(const Word& w) {
    Bytes32 out{};
    Word v = w;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

Word from_bytes32(const Bytes32& b) { return from_be(b.data(), b.size()); }

Word from_be(const std::uint8_t* data, std::size_t n) {
    Word v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        v <<= 8;
        v |= data[i];
    }
    return v;
}

std::string to_hex(const std::uint8_t* data, std::size_t n) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s = "0x";
    s.reserve(2 + 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back(kDigits[data[i] >> 4]);
        s.push_back(kDigits[data[i] & 0xf]);
    }
    return s;
}

std::string hex_number(const ByteAddr& v) {
    if (v == 0) return "0x0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string digits;
    ByteAddr x = v;
    while (x != 0) {
        digits.push_back(kDigits[static_cast<unsigned>(x & 0xf)]);
        x >>= 4;
    }
    return "0x" + std::string(digits.rbegin(), digits.rend());
}

std::string hex_address(const Address& a) {
    const Bytes32 b = to_bytes32(a);
    return to_hex(b.data() + 12, 20);
}

std::string decimal(const Word& v) { return v.str(); }

BigInt parse_integer(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty integer");
    BigInt v = 0;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        for (std::size_t i = 2; i < text.size(); ++i) {
            const char c = text[i];
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else throw std::invalid_argument("bad hex digit in '" + text + "'");
            v = v * 16 + d;
        }
        return v;
    }
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit in '" + text + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace solsem
