#include "solsem/layout.hpp"

#include "solsem/errors.hpp"

#include <limits>

namespace solsem {
namespace {

std::uint64_t checked_size(const ByteAddr& v, const SemType& t) {
    if (v > std::numeric_limits<std::uint64_t>::max())
        throw Error(ErrorKind::UnsizedType, "type " + t.str() + " is too large to lay out");
    return static_cast<std::uint64_t>(v);
}

std::vector<TypePtr> field_types(const SemType& s) {
    std::vector<TypePtr> out;
    out.reserve(s.fields().size());
    for (const auto& f : s.fields()) out.push_back(f.type);
    return out;
}

}  // namespace

std::uint64_t size_of(const SemType& t, RuleLog* log) {
    switch (t.kind()) {
        case TypeKind::UInt:
        case TypeKind::Int:
            note(log, "Size1");
            return t.bits() / 8;
        case TypeKind::Bool:
            note(log, "Size1");
            return 1;
        case TypeKind::Address:
        case TypeKind::Contract:
            note(log, "Size1");
            return 20;
        case TypeKind::StaticArray: {
            note(log, "Size2");
            const ByteAddr raw = ByteAddr{t.count()} * size_of(*t.elem(), log);
            return checked_size(round_up(raw), t);
        }
        case TypeKind::Struct: {
            note(log, "Size3");
            const auto fts = field_types(t);
            return checked_size(round_up(size_packed(0, fts, log)), t);
        }
        case TypeKind::DynArray:
        case TypeKind::String:
            note(log, "Size4");
            return kAlign;
        case TypeKind::Mapping:
            note(log, "Size5");
            return kAlign;
        case TypeKind::Ref:
            note(log, "Size7");
            return kAlign;
    }
    throw Error(ErrorKind::Internal, "size_of: unknown type kind");
}

ByteAddr size_packed(const ByteAddr& start, std::span<const TypePtr> fields, RuleLog* log) {
    ByteAddr n = start;
    for (const auto& f : fields) {
        note(log, f->is_primitive() ? "SR2" : "SR3");
        n = align_up(n, *f, nullptr) + size_of(*f, log);
    }
    note(log, "SR1");
    return n;
}

ByteAddr align_up(const ByteAddr& addr, const SemType& t, RuleLog* log) {
    if (t.is_primitive()) {
        const std::uint64_t sz = size_of(t, log);
        const ByteAddr boundary = next_boundary(addr);
        return addr + sz <= boundary ? addr : boundary;
    }
    return round_up(addr);
}

ByteAddr bump(const ByteAddr& addr, const SemType& t, RuleLog* log) {
    return align_up(addr, t, log) + size_of(t, log);
}

std::uint64_t field_offset(const SemType& s, std::size_t k, RuleLog* log) {
    if (s.kind() != TypeKind::Struct) throw Error(ErrorKind::TypeError, "field_offset on non-struct " + s.str());
    if (k >= s.fields().size())
        throw Error(ErrorKind::TypeError, "struct " + s.name() + " has no field #" + std::to_string(k));
    const auto fts = field_types(s);
    const ByteAddr before = size_packed(0, std::span<const TypePtr>(fts.data(), k), log);
    return checked_size(align_up(before, *s.fields()[k].type, log), s);
}

}  // namespace solsem
