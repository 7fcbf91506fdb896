#include "solsem/types.hpp"

#include "solsem/errors.hpp"

namespace solsem {

std::string_view to_string(Location loc) { return loc == Location::Storage ? "storage" : "memory"; }

namespace {

bool is_key_type(const SemType& t) {
    switch (t.kind()) {
        case TypeKind::UInt:
        case TypeKind::Address:
            return true;
        case TypeKind::StaticArray:
            return is_key_type(*t.elem());
        default:
            return false;
    }
}

std::shared_ptr<SemType> make(TypeKind k) { return std::make_shared<SemType>(k); }

}  // namespace

TypePtr SemType::uint(unsigned bits) {
    if (bits < 8 || bits > 256 || (bits & (bits - 1)) != 0)
        throw Error(ErrorKind::UnsupportedFeature, "uint" + std::to_string(bits) + ": only power-of-two widths 8..256");
    auto t = make(TypeKind::UInt);
    t->bits_ = bits;
    return t;
}

TypePtr SemType::int256() {
    auto t = make(TypeKind::Int);
    t->bits_ = 256;
    return t;
}

TypePtr SemType::boolean() {
    static const TypePtr t = make(TypeKind::Bool);
    return t;
}

TypePtr SemType::address() {
    static const TypePtr t = [] {
        auto a = make(TypeKind::Address);
        a->bits_ = 160;
        return a;
    }();
    return t;
}

TypePtr SemType::string() {
    static const TypePtr t = make(TypeKind::String);
    return t;
}

TypePtr SemType::static_array(TypePtr elem, std::uint64_t count) {
    if (!elem) throw Error(ErrorKind::Internal, "static_array: null element type");
    if (count == 0) throw Error(ErrorKind::TypeError, "static arrays must have at least one element");
    if (elem->kind() == TypeKind::Mapping) throw Error(ErrorKind::TypeError, "arrays of mappings are not supported");
    auto t = make(TypeKind::StaticArray);
    t->elem_ = std::move(elem);
    t->count_ = count;
    return t;
}

TypePtr SemType::dyn_array(TypePtr elem) {
    if (!elem) throw Error(ErrorKind::Internal, "dyn_array: null element type");
    if (elem->kind() == TypeKind::Mapping) throw Error(ErrorKind::TypeError, "arrays of mappings are not supported");
    auto t = make(TypeKind::DynArray);
    t->elem_ = std::move(elem);
    return t;
}

TypePtr SemType::mapping(TypePtr key, TypePtr value) {
    if (!key || !value) throw Error(ErrorKind::Internal, "mapping: null type");
    if (!is_key_type(*key))
        throw Error(ErrorKind::TypeError, "mapping key must be uint, address or a static array of those, got " + key->str());
    auto t = make(TypeKind::Mapping);
    t->key_ = std::move(key);
    t->elem_ = std::move(value);
    return t;
}

TypePtr SemType::structure(std::string name, std::vector<StructField> fields) {
    if (fields.empty()) throw Error(ErrorKind::UnsizedType, "struct " + name + " has no fields");
    auto t = make(TypeKind::Struct);
    t->name_ = std::move(name);
    t->fields_ = std::move(fields);
    return t;
}

TypePtr SemType::contract(std::string name) {
    auto t = make(TypeKind::Contract);
    t->name_ = std::move(name);
    t->bits_ = 160;
    return t;
}

TypePtr SemType::ref(TypePtr inner, Location pointee) {
    if (!inner) throw Error(ErrorKind::Internal, "ref: null type");
    if (inner->kind() == TypeKind::Ref) throw Error(ErrorKind::Internal, "ref of ref");
    if (inner->kind() == TypeKind::Mapping && pointee != Location::Storage)
        throw Error(ErrorKind::TypeError, "mappings can only live in storage");
    auto t = make(TypeKind::Ref);
    t->elem_ = std::move(inner);
    t->pointee_ = pointee;
    return t;
}

bool SemType::is_primitive() const noexcept {
    switch (kind_) {
        case TypeKind::UInt:
        case TypeKind::Int:
        case TypeKind::Bool:
        case TypeKind::Address:
        case TypeKind::Contract:
            return true;
        default:
            return false;
    }
}

std::string SemType::str() const {
    switch (kind_) {
        case TypeKind::UInt: return "uint" + std::to_string(bits_);
        case TypeKind::Int: return "int256";
        case TypeKind::Bool: return "bool";
        case TypeKind::Address: return "address";
        case TypeKind::String: return "string";
        case TypeKind::StaticArray: return elem_->str() + "[" + std::to_string(count_) + "]";
        case TypeKind::DynArray: return elem_->str() + "[]";
        case TypeKind::Mapping: return "mapping(" + key_->str() + "=>" + elem_->str() + ")";
        case TypeKind::Struct: return "struct " + name_;
        case TypeKind::Contract: return "contract " + name_;
        case TypeKind::Ref: return "ref " + elem_->str() + " " + std::string(to_string(pointee_));
    }
    return "?";
}

bool same_type(const SemType& a, const SemType& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TypeKind::UInt:
        case TypeKind::Int:
            return a.bits() == b.bits();
        case TypeKind::Bool:
        case TypeKind::Address:
        case TypeKind::String:
            return true;
        case TypeKind::StaticArray:
            return a.count() == b.count() && same_type(*a.elem(), *b.elem());
        case TypeKind::DynArray:
            return same_type(*a.elem(), *b.elem());
        case TypeKind::Mapping:
            return same_type(*a.key(), *b.key()) && same_type(*a.value(), *b.value());
        case TypeKind::Struct:
        case TypeKind::Contract:
            return a.name() == b.name();
        case TypeKind::Ref:
            return a.pointee() == b.pointee() && same_type(*a.inner(), *b.inner());
    }
    return false;
}

}  // namespace solsem
