#include <doctest.h>

#include "fixtures.hpp"

#include "solsem/keccak.hpp"

#include <map>

using namespace solsem;

namespace {

// Digests produced by tests/oracles/keccak_oracle.py at build time.
const std::map<std::string, std::string> kOracle = {
#include "oracle_hashes.inc"
};

Bytes word_bytes(const Word& w) {
    const Bytes32 x = to_bytes32(w);
    return Bytes(x.begin(), x.end());
}

Bytes concat(Bytes a, const Bytes& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string digest(const Bytes& data) { return to_hex(keccak256(data)).substr(2); }

}  // namespace

TEST_CASE("keccak256 agrees with the oracle on every frozen input") {
    Bytes long_input;
    for (int i = 0; i < 200; ++i) long_input.push_back(static_cast<std::uint8_t>(i));
    const std::map<std::string, Bytes> inputs = {
        {"empty", {}},
        {"dyn_base0", word_bytes(0)},
        {"dyn_base1", word_bytes(1)},
        {"map_1_100", concat(word_bytes(1), word_bytes(100))},
        {"map_1_200", concat(word_bytes(1), word_bytes(200))},
        {"map_0_100", concat(word_bytes(0), word_bytes(100))},
        {"map_0_200", concat(word_bytes(0), word_bytes(200))},
        {"map_0_300", concat(word_bytes(0), word_bytes(300))},
        {"evm_100_0", concat(word_bytes(100), word_bytes(0))},
        {"evm_200_0", concat(word_bytes(200), word_bytes(0))},
        {"abc", Bytes{'a', 'b', 'c'}},
        {"long_200", long_input},
    };
    REQUIRE(kOracle.size() == inputs.size());
    for (const auto& [name, data] : inputs) {
        CAPTURE(name);
        CHECK(digest(data) == kOracle.at(name));
    }
}

TEST_CASE("frozen digests") {
    CHECK(digest({}) == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(digest(Bytes{'a', 'b', 'c'}) == "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
}

TEST_CASE("rate-boundary inputs hash without error and differ") {
    // 135, 136 and 137 bytes straddle one Keccak-256 block
    const Bytes a(135, 0x61), b(136, 0x61), c(137, 0x61);
    CHECK(digest(a) != digest(b));
    CHECK(digest(b) != digest(c));
}

TEST_CASE("dynamic array element slots") {
    const Word base = fixtures::word_of_hex("290decd9548b62a8d60345a988386fc84ba6bc95484008f6362f93160ef3e563");
    CHECK(slot_of_dyn(0, 0) == base);
    CHECK(slot_of_dyn(0, 1) == base + 1);
    CHECK(slot_of_dyn(1, 0) == fixtures::word_of_hex(kOracle.at("dyn_base1")));
}

TEST_CASE("dynamic slot arithmetic wraps at 2^256") {
    const Word base = slot_of_dyn(0, 0);
    const Word wrap = ~base + 1;  // index that brings base + i back to 0
    CHECK(slot_of_dyn(0, wrap) == 0);
}

TEST_CASE("mapping slots in both hash orders") {
    const auto key = [](unsigned k) { return to_bytes32(Word{k}); };
    CHECK(slot_of_map(0, key(100)) == fixtures::word_of_hex(kOracle.at("map_0_100")));
    CHECK(slot_of_map(1, key(200)) == fixtures::word_of_hex(kOracle.at("map_1_200")));
    CHECK(slot_of_map(0, key(100), MapHashOrder::KeyThenBase) == fixtures::word_of_hex(kOracle.at("evm_100_0")));
    CHECK(slot_of_map(0, key(200), MapHashOrder::KeyThenBase) == fixtures::word_of_hex(kOracle.at("evm_200_0")));
    CHECK(slot_of_map(0, key(100)) != slot_of_map(0, key(100), MapHashOrder::KeyThenBase));
}
