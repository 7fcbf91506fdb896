#include "solsem/keccak.hpp"

#include <cstring>

namespace solsem {
namespace {

constexpr std::size_t kRate = 136;

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho offsets and pi lane order, walking lanes in the order visited by pi.
constexpr unsigned kRho[24] = {1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14,
                               27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
constexpr unsigned kPi[24] = {10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4,
                              15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

inline std::uint64_t rotl64(std::uint64_t x, unsigned n) { return (x << n) | (x >> (64 - n)); }

void keccak_f1600(std::uint64_t st[25]) {
    std::uint64_t bc[5];
    for (const std::uint64_t rc : kRoundConstants) {
        // theta
        for (int i = 0; i < 5; ++i) bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i) {
            const std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        // rho + pi
        std::uint64_t t = st[1];
        for (int i = 0; i < 24; ++i) {
            const unsigned j = kPi[i];
            const std::uint64_t tmp = st[j];
            st[j] = rotl64(t, kRho[i]);
            t = tmp;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
            for (int i = 0; i < 5; ++i) st[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        // iota
        st[0] ^= rc;
    }
}

inline std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

Bytes32 keccak256(std::span<const std::uint8_t> data) {
    std::uint64_t st[25] = {};
    std::size_t off = 0;
    while (data.size() - off >= kRate) {
        for (std::size_t i = 0; i < kRate / 8; ++i) st[i] ^= load_le64(data.data() + off + 8 * i);
        keccak_f1600(st);
        off += kRate;
    }
    std::uint8_t block[kRate] = {};
    const std::size_t rest = data.size() - off;
    if (rest > 0) std::memcpy(block, data.data() + off, rest);
    block[rest] ^= 0x01;
    block[kRate - 1] ^= 0x80;
    for (std::size_t i = 0; i < kRate / 8; ++i) st[i] ^= load_le64(block + 8 * i);
    keccak_f1600(st);

    Bytes32 out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t b = 0; b < 8; ++b) out[8 * i + b] = static_cast<std::uint8_t>(st[i] >> (8 * b));
    }
    return out;
}

Word slot_of_dyn(const Word& base, const Word& index) {
    const Bytes32 key = to_bytes32(base);
    return from_bytes32(keccak256(key)) + index;  // Word arithmetic wraps mod 2^256
}

Word slot_of_map(const Word& base, const Bytes32& key, MapHashOrder order) {
    const Bytes32 b = to_bytes32(base);
    std::uint8_t buf[64];
    const Bytes32& first = order == MapHashOrder::BaseThenKey ? b : key;
    const Bytes32& second = order == MapHashOrder::BaseThenKey ? key : b;
    std::memcpy(buf, first.data(), 32);
    std::memcpy(buf + 32, second.data(), 32);
    return from_bytes32(keccak256(std::span<const std::uint8_t>(buf, 64)));
}

}  // namespace solsem
