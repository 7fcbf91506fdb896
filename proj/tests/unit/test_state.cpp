#include <doctest.h>

#include "fixtures.hpp"

using namespace solsem;

TEST_CASE("byte store reads zeros and writes across pages") {
    ByteStore s;
    CHECK(s.read(1000, 4) == Bytes(4, 0));
    const Bytes data = {1, 2, 3, 4, 5, 6};
    s.write(30, data);  // spans the boundary at 32
    CHECK(s.read(30, 6) == data);
    CHECK(s.pages().size() == 2);
    CHECK(s.read(29, 1) == Bytes{0});
}

TEST_CASE("zeroed pages are dropped so equal contents compare equal") {
    ByteStore a, b;
    a.write(64, Bytes{9});
    a.write(64, Bytes{0});
    CHECK(a.pages().empty());
    CHECK(a == b);
}

TEST_CASE("addresses beyond 2^256 bytes are representable") {
    ByteStore s;
    const ByteAddr far = slot_to_addr(~Word{0});
    s.write(far + 31, Bytes{7});
    CHECK(s.read(far + 31, 1) == Bytes{7});
}

TEST_CASE("big-endian encoding and range checks") {
    CHECK(encode_value(0x0102, *SemType::uint(16)) == Bytes{1, 2});
    CHECK(encode_value(1, *SemType::boolean()) == Bytes{1});
    CHECK(encode_value(8, *SemType::uint(256)).back() == 8);
    CHECK_THROWS_AS(encode_value(256, *SemType::uint(8)), Error);
    CHECK_THROWS_AS(encode_value(2, *SemType::boolean()), Error);
    CHECK(decode_value(Bytes{0xff, 0xfe}, *SemType::uint(16)) == 0xfffe);
}

TEST_CASE("memory frames") {
    MemoryState m;
    const ByteAddr a = m.fr("x", SemType::uint(8));
    const ByteAddr b = m.fr("y", SemType::static_array(SemType::uint(256), 2));
    CHECK(a % 32 == 0);
    CHECK(b >= a + 32);
    CHECK(m.lookup("x"));
    CHECK_THROWS_AS(m.fr("x", SemType::uint(8)), Error);
    m.push_scope();
    CHECK(m.lookup("x") == nullptr);  // callee frames do not see the caller
    m.pop_scope();
    CHECK(m.lookup("x"));
    CHECK_THROWS_AS(m.pop_scope(), Error);
}

TEST_CASE("rebinding the same declaration is allowed") {
    MemoryState m;
    int decl = 0;
    m.fr("i", SemType::uint(256), &decl);
    CHECK_NOTHROW(m.fr("i", SemType::uint(256), &decl));
}

TEST_CASE("chain balances") {
    Chain c;
    c.set_balance(fixtures::kR, 5);
    CHECK(c.balance_of(fixtures::kR) == 5);
    CHECK(c.balance_of(fixtures::kS) == 0);
    CHECK(c.total_balance() == 5);
    CHECK(hex_address(c.next_address()) == std::string(kInstanceBase));
}

TEST_CASE("same_world ignores memory and the transaction counter") {
    Chain a;
    a.instances.emplace(1, Instance{"C", Config{}, 0});
    Chain b = a;
    b.tx_count = 9;
    b.instances.at(1).config.memory.fr("tmp", SemType::uint(8));
    CHECK(same_world(a, b));
    b.instances.at(1).config.storage.bytes.write(0, Bytes{1});
    CHECK(!same_world(a, b));
}
