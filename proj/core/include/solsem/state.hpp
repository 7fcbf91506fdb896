#pragma once

#include "solsem/numeric.hpp"
#include "solsem/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solsem {

/// Sparse byte-addressed store. Bytes are grouped in 32-byte pages keyed by
/// address / 32; a page that becomes all zero is dropped, so two stores with
/// the same readable contents compare equal.
class ByteStore {
public:
    using Page = std::array<std::uint8_t, kSlotBytes>;

    Bytes read(const ByteAddr& addr, std::size_t size) const;
    void write(const ByteAddr& addr, std::span<const std::uint8_t> bytes);
    void clear() { pages_.clear(); }

    const std::map<ByteAddr, Page>& pages() const noexcept { return pages_; }
    bool operator==(const ByteStore&) const = default;

private:
    std::map<ByteAddr, Page> pages_;
};

/// An R-value. Primitives, lengths and pointers use `word`; static arrays and
/// structs carry their exact byte image in `bytes`; strings carry content.
struct Value {
    Word word;
    Bytes bytes;

    static Value of(const Word& w) { return Value{w, {}}; }
    static Value blob(Bytes b) { return Value{0, std::move(b)}; }
    bool operator==(const Value&) const = default;
};

/// Big-endian fixed-width encoding of a primitive into size_of(t) bytes.
/// Throws RangeError when `v` does not fit.
Bytes encode_value(const Word& v, const SemType& t);
Word decode_value(std::span<const std::uint8_t> bytes, const SemType& t);

/// Reads a value of type `t`; for primitives/refs/dyn arrays/mappings this is
/// the fixed-width word, for static arrays and structs the raw image.
Value value_from_bytes(Bytes bytes, const SemType& t);

/// One entry in the name/type space of storage or of a memory frame.
struct Binding {
    ByteAddr addr;
    TypePtr type;
    const void* decl = nullptr;  // declaring AST node, for re-execution in loops
};

/// A hash-derived storage location that has been written or read.
struct HashedRegion {
    std::string kind;  // "dyn" or "map"
    std::string base;  // rendering of the base expression, e.g. "a" or "credit"
    Word base_slot;
    std::string key;   // index or key, decimal / hex
    Word slot;
    TypePtr type;
};

/// Ψ: persistent storage of one contract instance.
struct StorageState {
    ByteStore bytes;
    ByteAddr lambda = 0;
    std::map<std::string, Binding> names;
    std::vector<std::string> order;  // declaration order
    std::map<Word, HashedRegion> hashed;  // keyed by slot

    bool operator==(const StorageState& o) const {
        return bytes == o.bytes && lambda == o.lambda && order == o.order;
    }
};

/// M: transient memory with its stack of name/type spaces.
struct MemoryState {
    using Frame = std::map<std::string, Binding>;

    ByteStore bytes;
    ByteAddr fresh = 0;
    std::vector<Frame> scopes{Frame{}};

    /// Binds `id` in the top frame to a fresh 32-aligned region of
    /// size_of(t) bytes; returns the address.
    ByteAddr fr(const std::string& id, TypePtr t, const void* decl = nullptr);
    /// Reserves an unnamed fresh region (for memory arrays and strings).
    ByteAddr allocate(std::uint64_t size);
    const Binding* lookup(const std::string& id) const;

    void push_scope() { scopes.emplace_back(); }
    void pop_scope();
    std::size_t depth() const noexcept { return scopes.size(); }
};

struct Msg {
    Address sender = 0;
    Word value = 0;
    Word gas = 0;
    bool operator==(const Msg&) const = default;
};

/// What E-FUN1/E-FUN2 push onto the callee's Ω: the caller's identity and
/// the message context to restore.
struct CallerContext {
    Address caller = 0;
    Msg saved_msg;
    std::size_t depth = 0;
    bool operator==(const CallerContext&) const = default;
};

/// σ = (Ψ, M, Ω)
struct Config {
    StorageState storage;
    MemoryState memory;
    std::vector<CallerContext> omega;
};

struct Instance {
    std::string contract;
    Config config;
    Word balance = 0;
};

/// Δ: deployed instances, externally owned account balances and counters.
struct Chain {
    std::map<Address, Instance> instances;
    std::map<Address, Word> accounts;  // externally owned accounts
    std::uint64_t tx_count = 0;
    std::uint64_t deployed = 0;
    Msg msg;
    std::vector<Msg> msg_stack;

    Instance* find(const Address& a);
    const Instance* find(const Address& a) const;
    Word balance_of(const Address& a) const;
    void set_balance(const Address& a, const Word& v);
    /// Sum of instance and account balances, in unbounded precision.
    BigInt total_balance() const;
    Address next_address() const;
};

/// Byte-level equality of everything a transaction may change, excluding
/// transient memory.
bool same_world(const Chain& a, const Chain& b);

/// The address deployed instances receive, in deployment order.
inline constexpr std::string_view kInstanceBase = "0xc0de000000000000000000000000000000000000";

}  // namespace solsem
