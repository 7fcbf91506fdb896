#include "solsem/state.hpp"

#include "solsem/errors.hpp"
#include "solsem/layout.hpp"

#include <algorithm>

namespace solsem {

Bytes ByteStore::read(const ByteAddr& addr, std::size_t size) const {
    Bytes out(size, 0);
    std::size_t done = 0;
    while (done < size) {
        const ByteAddr a = addr + done;
        const ByteAddr page = a / kSlotBytes;
        const auto off = static_cast<std::size_t>(a % kSlotBytes);
        const std::size_t n = std::min<std::size_t>(kSlotBytes - off, size - done);
        if (auto it = pages_.find(page); it != pages_.end())
            std::copy_n(it->second.begin() + off, n, out.begin() + done);
        done += n;
    }
    return out;
}

void ByteStore::write(const ByteAddr& addr, std::span<const std::uint8_t> bytes) {
    std::size_t done = 0;
    while (done < bytes.size()) {
        const ByteAddr a = addr + done;
        const ByteAddr page = a / kSlotBytes;
        const auto off = static_cast<std::size_t>(a % kSlotBytes);
        const std::size_t n = std::min<std::size_t>(kSlotBytes - off, bytes.size() - done);
        auto it = pages_.find(page);
        if (it == pages_.end()) {
            const bool all_zero = std::all_of(bytes.begin() + done, bytes.begin() + done + n, [](auto b) { return b == 0; });
            if (all_zero) {
                done += n;
                continue;
            }
            it = pages_.emplace(page, Page{}).first;
        }
        std::copy_n(bytes.begin() + done, n, it->second.begin() + off);
        if (std::all_of(it->second.begin(), it->second.end(), [](auto b) { return b == 0; })) pages_.erase(it);
        done += n;
    }
}

Bytes encode_value(const Word& v, const SemType& t) {
    const std::uint64_t size = t.kind() == TypeKind::Ref ? kSlotBytes : size_of(t);
    if (size > kSlotBytes) throw Error(ErrorKind::Internal, "encode_value: " + t.str() + " is not a word type");
    if (size < kSlotBytes && (v >> (size * 8)) != 0)
        throw Error(ErrorKind::RangeError, "value " + decimal(v) + " does not fit in " + t.str());
    if (t.kind() == TypeKind::Bool && v > 1) throw Error(ErrorKind::RangeError, "invalid bool value " + decimal(v));
    const Bytes32 full = to_bytes32(v);
    return Bytes(full.end() - static_cast<std::ptrdiff_t>(size), full.end());
}

Word decode_value(std::span<const std::uint8_t> bytes, const SemType&) {
    return from_be(bytes.data(), bytes.size());
}

Value value_from_bytes(Bytes bytes, const SemType& t) {
    switch (t.kind()) {
        case TypeKind::StaticArray:
        case TypeKind::Struct:
            return Value::blob(std::move(bytes));
        default:
            return Value::of(decode_value(bytes, t));
    }
}

ByteAddr MemoryState::allocate(std::uint64_t size) {
    const ByteAddr addr = fresh;
    fresh = round_up(fresh + std::max<std::uint64_t>(size, 1));
    return addr;
}

ByteAddr MemoryState::fr(const std::string& id, TypePtr t, const void* decl) {
    auto& frame = scopes.back();
    if (auto it = frame.find(id); it != frame.end()) {
        if (!decl || it->second.decl != decl)
            throw Error(ErrorKind::DuplicateDeclaration, "'" + id + "' is already declared in this scope");
    }
    const ByteAddr addr = allocate(size_of(*t));
    frame[id] = Binding{addr, std::move(t), decl};
    return addr;
}

const Binding* MemoryState::lookup(const std::string& id) const {
    const auto& frame = scopes.back();
    auto it = frame.find(id);
    return it == frame.end() ? nullptr : &it->second;
}

void MemoryState::pop_scope() {
    if (scopes.size() <= 1) throw Error(ErrorKind::ScopeUnderflow, "pop of the base name/type space");
    scopes.pop_back();
}

Instance* Chain::find(const Address& a) {
    auto it = instances.find(a);
    return it == instances.end() ? nullptr : &it->second;
}

const Instance* Chain::find(const Address& a) const {
    auto it = instances.find(a);
    return it == instances.end() ? nullptr : &it->second;
}

Word Chain::balance_of(const Address& a) const {
    if (const auto* inst = find(a)) return inst->balance;
    auto it = accounts.find(a);
    return it == accounts.end() ? Word{0} : it->second;
}

void Chain::set_balance(const Address& a, const Word& v) {
    if (auto* inst = find(a)) {
        inst->balance = v;
    } else if (v == 0) {
        accounts.erase(a);
    } else {
        accounts[a] = v;
    }
}

BigInt Chain::total_balance() const {
    BigInt sum = 0;
    for (const auto& [a, inst] : instances) sum += BigInt(inst.balance);
    for (const auto& [a, v] : accounts) sum += BigInt(v);
    return sum;
}

Address Chain::next_address() const {
    return Address(parse_integer(std::string(kInstanceBase))) + deployed;
}

bool same_world(const Chain& a, const Chain& b) {
    if (a.accounts != b.accounts || a.instances.size() != b.instances.size() || a.deployed != b.deployed ||
        a.msg != b.msg || a.msg_stack != b.msg_stack)
        return false;
    for (auto ia = a.instances.begin(), ib = b.instances.begin(); ia != a.instances.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.contract != ib->second.contract ||
            ia->second.balance != ib->second.balance || !(ia->second.config.storage == ib->second.config.storage) ||
            ia->second.config.omega != ib->second.config.omega)
            return false;
    }
    return true;
}

}  // namespace solsem
