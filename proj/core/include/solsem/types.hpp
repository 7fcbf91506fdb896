#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace solsem {

/// Where the bytes an expression denotes live: persistent storage or
/// transient memory.
enum class Location : std::uint8_t { Storage, Memory };

std::string_view to_string(Location loc);

enum class TypeKind : std::uint8_t {
    UInt,
    Int,
    Bool,
    Address,
    String,
    StaticArray,
    DynArray,
    Mapping,
    Struct,
    Contract,
    Ref,
};

class SemType;
using TypePtr = std::shared_ptr<const SemType>;

struct StructField {
    std::string name;
    TypePtr type;
};

/// The value-type grammar: uint widths, int256, bool, address, string,
/// static and dynamic arrays, mappings, structs, contract references and the
/// implicit `ref` wrapper the compiler introduces for reference-typed locals.
///
/// Instances are immutable and shared; construct them through the factory
/// functions, which enforce the grammar's side conditions (mapping keys come
/// from the key grammar, `ref` never nests, widths are powers of two).
class SemType {
public:
    static TypePtr uint(unsigned bits);
    static TypePtr int256();
    static TypePtr boolean();
    static TypePtr address();
    static TypePtr string();
    static TypePtr static_array(TypePtr elem, std::uint64_t count);
    static TypePtr dyn_array(TypePtr elem);
    static TypePtr mapping(TypePtr key, TypePtr value);
    static TypePtr structure(std::string name, std::vector<StructField> fields);
    static TypePtr contract(std::string name);
    /// `pointee` says where the referenced bytes live.
    static TypePtr ref(TypePtr inner, Location pointee);

    TypeKind kind() const noexcept { return kind_; }
    unsigned bits() const noexcept { return bits_; }
    std::uint64_t count() const noexcept { return count_; }
    const TypePtr& elem() const noexcept { return elem_; }    // arrays, ref inner
    const TypePtr& key() const noexcept { return key_; }      // mapping key
    const TypePtr& value() const noexcept { return elem_; }   // mapping value
    const TypePtr& inner() const noexcept { return elem_; }   // ref
    Location pointee() const noexcept { return pointee_; }    // ref
    const std::vector<StructField>& fields() const noexcept { return fields_; }
    const std::string& name() const noexcept { return name_; }

    /// uint, int, bool, address and contract references pack within slots.
    bool is_primitive() const noexcept;
    bool is_integer() const noexcept { return kind_ == TypeKind::UInt || kind_ == TypeKind::Int; }
    /// Address-valued: `address` or a contract reference.
    bool is_address_like() const noexcept {
        return kind_ == TypeKind::Address || kind_ == TypeKind::Contract;
    }

    /// Solidity-style spelling, e.g. `uint128[3][2]` or `mapping(address=>uint256)`.
    std::string str() const;

    explicit SemType(TypeKind k) : kind_(k) {}

private:
    TypeKind kind_;
    unsigned bits_ = 0;
    std::uint64_t count_ = 0;
    Location pointee_ = Location::Storage;
    TypePtr elem_;
    TypePtr key_;
    std::vector<StructField> fields_;
    std::string name_;
};

bool same_type(const SemType& a, const SemType& b);

/// A type paired with the location class of the data it denotes.
struct LocType {
    TypePtr type;
    Location loc = Location::Storage;
};

/// Collects the labels of sizing/typing rules used while computing a result.
class RuleLog {
public:
    void note(std::string_view label) { labels_.emplace(label); }
    const std::set<std::string>& labels() const noexcept { return labels_; }
    bool empty() const noexcept { return labels_.empty(); }
    void clear() { labels_.clear(); }

private:
    std::set<std::string> labels_;
};

inline void note(RuleLog* log, std::string_view label) {
    if (log) log->note(label);
}

}  // namespace solsem
