#include "solsem/interpreter.hpp"

#include "solsem/layout.hpp"

#include <algorithm>
#include <exception>
#include <functional>

#if __has_include(<pthread.h>)
#include <pthread.h>
#define SOLSEM_HAVE_PTHREAD 1
#endif

namespace solsem {

using namespace ast;

const std::vector<std::string>& all_rule_labels() {
    static const std::vector<std::string> labels = {
        "VD1",      "VD2",        "E-RV",    "E-ID1",   "E-ID2",  "E-ARRAY", "E-ARRAY-REF", "E-ARRAY-LEN",
        "E-ARRAY-LEN-ref", "E-D-ARRAY", "E-D-ARRAY-ref", "E-MAPPING", "E-MAPPING-REF", "E-STRUCT", "E-STRUCT-ref",
        "I-FUN",    "E-FUN",      "RETURN",  "E-FUN1",  "E-FUN2", "ASSIGN",  "SEQ",         "COND1",
        "COND2",    "WHILE1",     "WHILE2",  "SKIP1",   "SKIP2",  "SR1",     "SR2",         "SR3",
        "Size1",    "Size2",      "Size3",   "Size4",   "Size5",  "Size6",   "Size7",       "Type1",
        "Type2",    "Type3",      "Type4",   "Type5",   "Type6",  "Type7",   "Type8",
    };
    return labels;
}

namespace {

const Word kSignBit = Word{1} << 255;

BigInt to_signed(const Word& w) {
    if (w & kSignBit) return BigInt(w) - (BigInt(1) << 256);
    return BigInt(w);
}

Word from_signed(const BigInt& v) {
    BigInt m = v % (BigInt(1) << 256);
    if (m < 0) m += BigInt(1) << 256;
    return Word(m);
}

/// Number of storage slots one dynamic-array element occupies.
std::uint64_t stride_slots(const SemType& elem) { return (size_of(elem) + kSlotBytes - 1) / kSlotBytes; }

bool is_addressable(const Expr& e) {
    return e.kind == ExprKind::Ident || e.kind == ExprKind::Index || e.kind == ExprKind::Member;
}

/// Runs `fn` on a thread with a large stack: deep reentrancy nests many
/// interpreter frames.
void run_with_large_stack(const std::function<void()>& fn) {
#ifdef SOLSEM_HAVE_PTHREAD
    struct Job {
        const std::function<void()>* fn;
        std::exception_ptr error;
    } job{&fn, nullptr};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, std::size_t{512} << 20);
    pthread_t th;
    auto entry = [](void* p) -> void* {
        auto* j = static_cast<Job*>(p);
        try {
            (*j->fn)();
        } catch (...) {
            j->error = std::current_exception();
        }
        return nullptr;
    };
    const int rc = pthread_create(&th, &attr, entry, &job);
    pthread_attr_destroy(&attr);
    if (rc != 0) {
        fn();
        return;
    }
    pthread_join(th, nullptr);
    if (job.error) std::rethrow_exception(job.error);
#else
    fn();
#endif
}

}  // namespace

Word apply_binop(BinaryOp op, const Word& a, const Word& b, const SemType& t) {
    const bool is_signed = t.kind() == TypeKind::Int;
    const Word mask = mask_bits(t.bits() ? t.bits() : 256);
    auto cmp = [&](auto pred) -> Word {
        if (is_signed) return pred(to_signed(a), to_signed(b)) ? 1 : 0;
        return pred(a, b) ? 1 : 0;
    };
    switch (op) {
        case BinaryOp::Add: return (a + b) & mask;
        case BinaryOp::Sub: return (a - b) & mask;
        case BinaryOp::Mul: return (a * b) & mask;
        case BinaryOp::Div:
        case BinaryOp::Mod: {
            if (b == 0) throw Error(ErrorKind::DivisionByZero, op == BinaryOp::Div ? "division by zero" : "modulo by zero");
            if (!is_signed) return op == BinaryOp::Div ? a / b : a % b;
            const BigInt x = to_signed(a);
            const BigInt y = to_signed(b);
            const BigInt q = x / y;  // truncates toward zero
            return from_signed(op == BinaryOp::Div ? q : x - q * y);
        }
        case BinaryOp::Lt: return cmp([](const auto& x, const auto& y) { return x < y; });
        case BinaryOp::Le: return cmp([](const auto& x, const auto& y) { return x <= y; });
        case BinaryOp::Gt: return cmp([](const auto& x, const auto& y) { return x > y; });
        case BinaryOp::Ge: return cmp([](const auto& x, const auto& y) { return x >= y; });
        case BinaryOp::Eq: return a == b ? 1 : 0;
        case BinaryOp::Ne: return a != b ? 1 : 0;
        case BinaryOp::And: return (a != 0 && b != 0) ? 1 : 0;
        case BinaryOp::Or: return (a != 0 || b != 0) ? 1 : 0;
    }
    throw Error(ErrorKind::Internal, "apply_binop: unknown operator");
}

std::string render_value(const Value& v, const SemType& t) {
    switch (t.kind()) {
        case TypeKind::UInt:
        case TypeKind::DynArray:
        case TypeKind::Mapping:
            return decimal(v.word);
        case TypeKind::Int: {
            const BigInt s = to_signed(v.word);
            return s.str();
        }
        case TypeKind::Bool: return v.word != 0 ? "true" : "false";
        case TypeKind::Address:
        case TypeKind::Contract: return hex_address(v.word);
        case TypeKind::String: {
            std::string out = "\"";
            out.append(v.bytes.begin(), v.bytes.end());
            return out + "\"";
        }
        case TypeKind::Ref: return "ref " + hex_number(v.word);
        case TypeKind::StaticArray: {
            const SemType& et = *t.elem();
            const std::uint64_t es = size_of(et);
            std::string out = "[";
            for (std::uint64_t i = 0; i < t.count(); ++i) {
                if (i) out += ",";
                Bytes part(v.bytes.begin() + static_cast<std::ptrdiff_t>(i * es),
                           v.bytes.begin() + static_cast<std::ptrdiff_t>((i + 1) * es));
                out += render_value(value_from_bytes(std::move(part), et), et);
            }
            return out + "]";
        }
        case TypeKind::Struct: {
            std::string out = "{";
            for (std::size_t k = 0; k < t.fields().size(); ++k) {
                const auto& f = t.fields()[k];
                const std::uint64_t off = field_offset(t, k);
                const std::uint64_t sz = size_of(*f.type);
                if (k) out += ", ";
                Bytes part(v.bytes.begin() + static_cast<std::ptrdiff_t>(off),
                           v.bytes.begin() + static_cast<std::ptrdiff_t>(off + sz));
                out += f.name + ": " + render_value(value_from_bytes(std::move(part), *f.type), *f.type);
            }
            return out + "}";
        }
    }
    return "?";
}

struct Place {
    ByteAddr addr;
    Location space = Location::Storage;
};

struct Interpreter::Impl {
    struct Frame {
        Address self;
        const ContractInfo* contract = nullptr;
        const FunctionInfo* fn = nullptr;
        std::string fn_name;
    };

    std::shared_ptr<const Program> program;
    Options options;
    Chain chain;
    std::vector<TraceEvent> trace;
    std::uint64_t seq = 0;

    // per transaction
    std::vector<TraceEvent> events;
    std::vector<TraceWrite> pending;
    std::vector<Diagnostic> warnings;
    std::vector<Frame> frames;
    std::uint64_t steps = 0;

    Impl(std::shared_ptr<const Program> p, Options o) : program(std::move(p)), options(o) {}

    // ---- context ----------------------------------------------------

    const Frame& frame() const {
        if (frames.empty()) throw Error(ErrorKind::Internal, "no active frame");
        return frames.back();
    }
    Address self() const { return frame().self; }
    const ContractInfo& contract() const { return *frame().contract; }
    Instance& instance(const Address& a) {
        Instance* inst = chain.find(a);
        if (!inst) throw Error(ErrorKind::UnknownAddress, "no contract instance at " + hex_address(a));
        return *inst;
    }
    Config& cfg() { return instance(self()).config; }

    TypeContext ctx() {
        MemoryState* mem = &cfg().memory;
        return TypeContext{*program, contract(), [mem](const std::string& n) -> TypePtr {
                               const Binding* b = mem->lookup(n);
                               return b ? b->type : nullptr;
                           }};
    }
    Typed typed(const Expr& e, RuleLog* log = nullptr) { return type_of(ctx(), e, log); }

    void step() {
        ++steps;
        if (options.max_steps && steps > options.max_steps)
            throw Error(ErrorKind::StepLimit, "step limit of " + std::to_string(options.max_steps) + " exceeded");
    }

    void warn(const std::string& msg, Span span = {}) {
        Diagnostic d;
        d.severity = Diagnostic::Severity::Warning;
        d.kind = ErrorKind::Internal;
        d.span = span;
        d.message = msg;
        warnings.push_back(std::move(d));
    }

    // ---- trace --------------------------------------------------------

    TraceEvent& emit_at(const Address& addr, const std::string& fn, const std::string& rule, const RuleLog* log = nullptr) {
        TraceEvent ev;
        ev.seq = seq++;
        ev.rule = rule;
        ev.addr = addr;
        ev.fn = fn;
        ev.writes = std::move(pending);
        pending.clear();
        if (const Instance* inst = chain.find(addr)) ev.omega = inst->config.omega.size();
        ev.tx = chain.tx_count;
        if (log) ev.premises.assign(log->labels().begin(), log->labels().end());
        events.push_back(std::move(ev));
        return events.back();
    }

    TraceEvent& emit(const std::string& rule, const RuleLog* log = nullptr) {
        return emit_at(frame().self, frame().fn_name, rule, log);
    }

    // ---- bytes ----------------------------------------------------------

    ByteStore& store_of(Location space) {
        Config& c = cfg();
        return space == Location::Storage ? c.storage.bytes : c.memory.bytes;
    }

    Bytes read(const Place& p, std::size_t size) { return store_of(p.space).read(p.addr, size); }

    void write(const Place& p, const Bytes& bytes) {
        store_of(p.space).write(p.addr, bytes);
        pending.push_back(TraceWrite{p.space, p.addr, bytes});
    }

    Word read_word(const Place& p) {
        const Bytes b = read(p, kSlotBytes);
        return from_be(b.data(), b.size());
    }

    static Place deref_place(const Word& ptr, Location loc) { return Place{ByteAddr{ptr} * kSlotBytes, loc}; }
    static Word pointer_of(const Place& p) { return Word(p.addr / kSlotBytes); }
    static Word slot_of(const Place& p) {
        if (p.addr % kSlotBytes != 0) throw Error(ErrorKind::Internal, "base of a hashed region is not slot aligned");
        return Word(p.addr / kSlotBytes);
    }

    void register_region(const std::string& kind, const Expr& base, const Word& base_slot, const std::string& key,
                         const Word& slot, const TypePtr& type) {
        auto& regions = cfg().storage.hashed;
        if (regions.count(slot)) return;
        regions.emplace(slot, HashedRegion{kind, print(base), base_slot, key, slot, type});
    }

    // ---- strings ----------------------------------------------------------

    Bytes load_string(const Place& p) {
        if (p.space == Location::Storage) {
            const Word len = read_word(p);
            if (len > (Word{1} << 24)) throw Error(ErrorKind::RangeError, "string length out of range");
            const Place data{slot_to_addr(from_bytes32(keccak256(to_bytes32(slot_of(p))))), Location::Storage};
            return read(data, static_cast<std::size_t>(len));
        }
        const Word ptr = read_word(p);
        if (ptr == 0) return {};
        const Place hdr = deref_place(ptr, Location::Memory);
        const Word len = read_word(hdr);
        if (len > (Word{1} << 24)) throw Error(ErrorKind::RangeError, "string length out of range");
        return read(Place{hdr.addr + kSlotBytes, Location::Memory}, static_cast<std::size_t>(len));
    }

    void store_string(const Place& p, const Bytes& content) {
        if (p.space == Location::Storage) {
            const Word old_len = read_word(p);
            const Bytes32 len = to_bytes32(Word{content.size()});
            write(p, Bytes(len.begin(), len.end()));
            const std::size_t span =
                static_cast<std::size_t>(round_up(ByteAddr{std::max<Word>(old_len, Word{content.size()})}));
            Bytes data(span, 0);
            std::copy(content.begin(), content.end(), data.begin());
            const Word base = from_bytes32(keccak256(to_bytes32(slot_of(p))));
            if (!data.empty()) write(Place{slot_to_addr(base), Location::Storage}, data);
            return;
        }
        MemoryState& mem = cfg().memory;
        const ByteAddr region = mem.allocate(kSlotBytes + static_cast<std::uint64_t>(round_up(content.size())));
        const Bytes32 len = to_bytes32(Word{content.size()});
        write(Place{region, Location::Memory}, Bytes(len.begin(), len.end()));
        if (!content.empty()) write(Place{region + kSlotBytes, Location::Memory}, content);
        const Bytes32 ptr = to_bytes32(Word(region / kSlotBytes));
        write(p, Bytes(ptr.begin(), ptr.end()));
    }

    // ---- load / store -----------------------------------------------------

    Value load(const Place& p, const SemType& t, RuleLog* log = nullptr) {
        switch (t.kind()) {
            case TypeKind::String:
                note(log, "Size4");
                return Value::blob(load_string(p));
            case TypeKind::Ref:
                note(log, "Size7");
                return Value::of(read_word(p));
            default:
                return value_from_bytes(read(p, size_of(t, log)), t);
        }
    }

    void store(const Place& p, const SemType& t, const Value& v, RuleLog* log = nullptr) {
        switch (t.kind()) {
            case TypeKind::String:
                store_string(p, v.bytes);
                return;
            case TypeKind::Ref: {
                note(log, "Size7");
                const Bytes32 b = to_bytes32(v.word);
                write(p, Bytes(b.begin(), b.end()));
                return;
            }
            case TypeKind::StaticArray:
            case TypeKind::Struct: {
                const std::uint64_t size = size_of(t, log);
                if (v.bytes.size() != size) throw Error(ErrorKind::Internal, "image size mismatch for " + t.str());
                write(p, v.bytes);
                return;
            }
            case TypeKind::DynArray:
            case TypeKind::Mapping:
                throw Error(ErrorKind::UnsupportedFeature, "unsupported feature: copying a value of type " + t.str());
            default:
                size_of(t, log);
                write(p, encode_value(v.word, t));
                return;
        }
    }

    Value zero_value(const SemType& t) {
        switch (t.kind()) {
            case TypeKind::StaticArray:
            case TypeKind::Struct:
                return Value::blob(Bytes(size_of(t), 0));
            default:
                return Value::of(0);
        }
    }

    /// Re-encodes an image of `from` as `to` (element widths may differ for
    /// integer arrays).
    Bytes convert_image(const SemType& from, const SemType& to, const Bytes& img) {
        if (same_type(from, to)) return img;
        if (from.kind() == TypeKind::StaticArray && to.kind() == TypeKind::StaticArray && from.count() == to.count()) {
            const std::uint64_t fs = size_of(*from.elem());
            const std::uint64_t ts = size_of(*to.elem());
            Bytes out(size_of(to), 0);
            for (std::uint64_t i = 0; i < from.count(); ++i) {
                Bytes part(img.begin() + static_cast<std::ptrdiff_t>(i * fs),
                           img.begin() + static_cast<std::ptrdiff_t>((i + 1) * fs));
                Bytes conv;
                if (from.elem()->is_primitive()) conv = encode_value(from_be(part.data(), part.size()), *to.elem());
                else conv = convert_image(*from.elem(), *to.elem(), part);
                std::copy(conv.begin(), conv.end(), out.begin() + static_cast<std::ptrdiff_t>(i * ts));
            }
            return out;
        }
        throw Error(ErrorKind::TypeError, "cannot convert " + from.str() + " to " + to.str());
    }

    // ---- L-values ---------------------------------------------------------

    Place lvalue(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Ident: {
                if (const Binding* b = cfg().memory.lookup(e.name)) {
                    emit("E-ID2");
                    return Place{b->addr, Location::Memory};
                }
                const auto& names = cfg().storage.names;
                if (auto it = names.find(e.name); it != names.end()) {
                    emit("E-ID1");
                    return Place{it->second.addr, Location::Storage};
                }
                throw Error(ErrorKind::UnknownIdentifier, "undeclared identifier '" + e.name + "'", e.span);
            }
            case ExprKind::Index:
                return index_place(e);
            case ExprKind::Member:
                return member_place(e);
            default:
                throw Error(ErrorKind::TypeError, "expression is not addressable", e.span);
        }
    }

    /// Base of an index/member access: the L-value for direct bases, the
    /// pointer R-value for ref bases.
    Place base_place(const Expr& base, const SemType& bt) {
        if (bt.kind() == TypeKind::Ref) return deref_place(rvalue(base).word, bt.pointee());
        return lvalue(base);
    }

    Place index_place(const Expr& e) {
        RuleLog log;
        const Typed bt = typed(*e.base, &log);
        typed(e, &log);
        const SemType& B = *bt.type;
        const bool is_ref = B.kind() == TypeKind::Ref;
        const SemType& I = deref(B);
        switch (I.kind()) {
            case TypeKind::StaticArray: {
                const Word i = rvalue(*e.index).word;
                const Place base = base_place(*e.base, B);
                if (i >= I.count())
                    throw Error(ErrorKind::IndexOutOfBounds,
                                "index " + decimal(i) + " out of bounds for " + I.str(), e.span);
                const std::uint64_t es = size_of(*I.elem(), &log);
                emit(is_ref ? "E-ARRAY-REF" : "E-ARRAY", &log);
                return Place{base.addr + ByteAddr{i} * es, base.space};
            }
            case TypeKind::DynArray: {
                const Word i = rvalue(*e.index).word;
                const Place base = base_place(*e.base, B);
                const Word len = read_word(base);
                if (i >= len)
                    throw Error(ErrorKind::IndexOutOfBounds,
                                "index " + decimal(i) + " out of bounds for array of length " + decimal(len), e.span);
                size_of(I, &log);
                const Word p = slot_of(base);
                const Word slot = slot_of_dyn(p, i * stride_slots(*I.elem()));
                register_region("dyn", *e.base, p, decimal(i), slot, I.elem());
                emit(is_ref ? "E-D-ARRAY-ref" : "E-D-ARRAY", &log);
                return Place{slot_to_addr(slot), Location::Storage};
            }
            case TypeKind::Mapping: {
                const Value k = eval_as(*e.index, I.key());
                const Place base = base_place(*e.base, B);
                size_of(I, &log);
                const Word p = slot_of(base);
                Bytes32 key{};
                if (I.key()->kind() == TypeKind::StaticArray) key = keccak256(k.bytes);
                else key = to_bytes32(k.word);
                const Word slot = slot_of_map(p, key, options.hash_order);
                register_region("map", *e.base, p, render_value(k, *I.key()), slot, I.value());
                emit(is_ref ? "E-MAPPING-REF" : "E-MAPPING", &log);
                return Place{slot_to_addr(slot), Location::Storage};
            }
            default:
                throw Error(ErrorKind::TypeError, "cannot index a value of type " + B.str(), e.span);
        }
    }

    Place member_place(const Expr& e) {
        RuleLog log;
        const Typed bt = typed(*e.base, &log);
        typed(e, &log);
        const SemType& B = *bt.type;
        const bool is_ref = B.kind() == TypeKind::Ref;
        const SemType& S = deref(B);
        std::size_t k = 0;
        while (k < S.fields().size() && S.fields()[k].name != e.name) ++k;
        if (k == S.fields().size())
            throw Error(ErrorKind::TypeError, "struct " + S.name() + " has no member '" + e.name + "'", e.span);
        const Place base = base_place(*e.base, B);
        const std::uint64_t off = field_offset(S, k, &log);
        emit(is_ref ? "E-STRUCT-ref" : "E-STRUCT", &log);
        return Place{base.addr + off, base.space};
    }

    // ---- R-values ---------------------------------------------------------

    Value rvalue(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Ident:
            case ExprKind::Index:
            case ExprKind::Member: {
                RuleLog log;
                const Typed t = typed(e, &log);
                const Place p = lvalue(e);
                Value v = load(p, *t.type, &log);
                emit("E-RV", &log);
                return v;
            }
            case ExprKind::IntLit:
                if (e.number > BigInt(~Word{0}))
                    throw Error(ErrorKind::RangeError, "literal " + e.number.str() + " exceeds 256 bits", e.span);
                return Value::of(Word(e.number));
            case ExprKind::BoolLit:
                return Value::of(e.bool_value ? 1 : 0);
            case ExprKind::StringLit:
                return Value::blob(Bytes(e.text.begin(), e.text.end()));
            case ExprKind::ArrayLit: {
                const Typed t = typed(e);
                return Value::blob(image_for(e, *t.type));
            }
            case ExprKind::Call: {
                if (!contract().function(e.name)) return Value::of(rvalue(*e.args.at(0)).word & mask_bits(160));
                auto r = call_internal(e, false);
                if (!r) throw Error(ErrorKind::TypeError, "function '" + e.name + "' does not return a value", e.span);
                return *r;
            }
            case ExprKind::TypeConv: {
                const TypePtr to = program->resolve(*e.type_name, contract());
                const Typed from = typed(*e.args[0]);
                Word v = rvalue(*e.args[0]).word;
                if (to->kind() == TypeKind::Bool) {
                    if (from.type->kind() != TypeKind::Bool)
                        throw Error(ErrorKind::TypeError, "cannot convert to bool", e.span);
                    return Value::of(v);
                }
                if (to->kind() == TypeKind::Int) return Value::of(v);
                return Value::of(v & mask_bits(to->bits()));
            }
            case ExprKind::ExternalCall: {
                auto r = call_external(e);
                return r ? *r : Value::of(0);
            }
            case ExprKind::LowLevelCall:
                return Value::of(call_fallback(e) ? 1 : 0);
            case ExprKind::Push:
                return Value::of(exec_push(e));
            case ExprKind::ArrayLength: {
                RuleLog log;
                const Typed bt = typed(*e.base, &log);
                const SemType& B = *bt.type;
                const SemType& I = deref(B);
                if (I.kind() == TypeKind::StaticArray) return Value::of(I.count());
                if (B.kind() == TypeKind::Ref) {
                    const Word ptr = rvalue(*e.base).word;
                    const Word len = read_word(deref_place(ptr, B.pointee()));
                    size_of(I, &log);
                    emit("E-ARRAY-LEN-ref", &log);
                    return Value::of(len);
                }
                const Word len = rvalue(*e.base).word;
                emit("E-ARRAY-LEN", &log);
                return Value::of(len);
            }
            case ExprKind::Binary:
                return binary(e);
            case ExprKind::Unary: {
                const Typed t = typed(e);
                const Value v = rvalue(*e.base);
                if (e.unary_op == UnaryOp::Not) return Value::of(v.word == 0 ? 1 : 0);
                return Value::of(apply_binop(BinaryOp::Sub, 0, v.word, *t.type));
            }
            case ExprKind::Conditional: {
                const Value c = rvalue(*e.base);
                return rvalue(c.word != 0 ? *e.index : *e.alt);
            }
            case ExprKind::MsgSender:
                return Value::of(chain.msg.sender);
            case ExprKind::MsgValue:
                return Value::of(chain.msg.value);
            case ExprKind::This:
                return Value::of(self());
            case ExprKind::Balance: {
                const Address a = rvalue(*e.base).word;
                return Value::of(chain.balance_of(a));
            }
        }
        throw Error(ErrorKind::Internal, "rvalue: unknown expression kind", e.span);
    }

    Value binary(const Expr& e) {
        if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
            const bool l = rvalue(*e.base).word != 0;
            if (e.binary_op == BinaryOp::And && !l) return Value::of(0);
            if (e.binary_op == BinaryOp::Or && l) return Value::of(1);
            return Value::of(rvalue(*e.index).word != 0 ? 1 : 0);
        }
        const Typed lt = typed(*e.base);
        const Typed rt = typed(*e.index);
        const Value a = rvalue(*e.base);
        const Value b = rvalue(*e.index);
        if (lt.type->kind() == TypeKind::String) {
            const bool eq = a.bytes == b.bytes;
            return Value::of((e.binary_op == BinaryOp::Eq) == eq ? 1 : 0);
        }
        const TypePtr t = lt.type->is_integer() ? common_type(lt, rt) : lt.type;
        return Value::of(apply_binop(e.binary_op, a.word, b.word, *t));
    }

    // ---- values in the representation of a target type ---------------------

    Value eval_as(const Expr& e, const TypePtr& target) {
        switch (target->kind()) {
            case TypeKind::Ref:
                return pointer_for(e, *target);
            case TypeKind::StaticArray:
            case TypeKind::Struct:
                return Value::blob(image_for(e, *target));
            case TypeKind::DynArray:
            case TypeKind::Mapping:
                throw Error(ErrorKind::UnsupportedFeature,
                            "unsupported feature: copying a value of type " + target->str(), e.span);
            case TypeKind::String:
                return rvalue(e);
            default: {
                Value v = rvalue(e);
                if (target->kind() == TypeKind::Bool) return v;
                const unsigned bits = target->bits();
                if (target->kind() != TypeKind::Int && bits < 256 && (v.word >> bits) != 0)
                    throw Error(ErrorKind::RangeError, "value " + decimal(v.word) + " does not fit in " + target->str(),
                                e.span);
                return v;
            }
        }
    }

    Bytes image_for(const Expr& e, const SemType& t) {
        if (e.kind == ExprKind::ArrayLit && t.kind() == TypeKind::StaticArray) {
            if (e.args.size() != t.count())
                throw Error(ErrorKind::TypeError,
                            "array literal has " + std::to_string(e.args.size()) + " elements, expected " +
                                std::to_string(t.count()),
                            e.span);
            Bytes img(size_of(t), 0);
            const std::uint64_t es = size_of(*t.elem());
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                const Value ev = eval_as(*e.args[i], t.elem());
                Bytes part = t.elem()->is_primitive() ? encode_value(ev.word, *t.elem()) : ev.bytes;
                std::copy(part.begin(), part.end(), img.begin() + static_cast<std::ptrdiff_t>(i * es));
            }
            return img;
        }
        const Typed src = typed(e);
        const Value v = rvalue(e);
        if (src.type->kind() == TypeKind::Ref) {
            const SemType& inner = *src.type->inner();
            return convert_image(inner, t, read(deref_place(v.word, src.type->pointee()), size_of(inner)));
        }
        return convert_image(*src.type, t, v.bytes);
    }

    Value pointer_for(const Expr& e, const SemType& ref) {
        const SemType& inner = *ref.inner();
        const Typed src = typed(e);
        if (src.type && src.type->kind() == TypeKind::Ref && src.type->pointee() == ref.pointee() &&
            same_type(*src.type->inner(), inner))
            return rvalue(e);
        if (is_addressable(e) && src.type && src.loc == ref.pointee() && same_type(*src.type, inner))
            return Value::of(pointer_of(lvalue(e)));
        if (ref.pointee() == Location::Storage)
            throw Error(ErrorKind::TypeError, "storage pointer needs a storage " + inner.str(), e.span);
        const Bytes img = image_for(e, inner);
        return Value::of(new_memory_region(img));
    }

    Word new_memory_region(const Bytes& img) {
        const ByteAddr region = cfg().memory.allocate(img.size());
        write(Place{region, Location::Memory}, img);
        return Word(region / kSlotBytes);
    }

    // ---- statements -----------------------------------------------------------

    /// Returns true when a `return` unwound the statement.
    bool exec(const Stmt& s) {
        step();
        switch (s.kind) {
            case StmtKind::Block:
                if (s.body.size() >= 2) emit("SEQ");
                for (const auto& c : s.body)
                    if (exec(*c)) return true;
                return false;
            case StmtKind::VarDecl:
                var_decl(s);
                return false;
            case StmtKind::Assign: {
                RuleLog log;
                const Typed lt = typed(*s.target, &log);
                const Value v = eval_as(*s.expr, lt.type);
                const Place p = lvalue(*s.target);
                store(p, *lt.type, v, &log);
                emit("ASSIGN", &log);
                return false;
            }
            case StmtKind::If: {
                const bool c = rvalue(*s.expr).word != 0;
                emit(c ? "COND1" : "COND2");
                if (c) return exec(*s.then_branch);
                return s.else_branch ? exec(*s.else_branch) : false;
            }
            case StmtKind::While:
                for (;;) {
                    const bool c = rvalue(*s.expr).word != 0;
                    if (!c) {
                        emit("WHILE1");
                        return false;
                    }
                    emit("WHILE2");
                    if (exec(*s.then_branch)) return true;
                    step();
                }
            case StmtKind::Return:
                exec_return(s);
                return true;
            case StmtKind::ExprStmt:
                effect(*s.expr);
                return false;
            case StmtKind::Placeholder:
                return false;
        }
        return false;
    }

    void effect(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Call:
                if (contract().function(e.name)) {
                    call_internal(e, true);
                    return;
                }
                break;
            case ExprKind::ExternalCall:
                call_external(e);
                return;
            case ExprKind::LowLevelCall:
                call_fallback(e);
                return;
            case ExprKind::Push:
                exec_push(e);
                return;
            default:
                break;
        }
        rvalue(e);
    }

    void var_decl(const Stmt& s) {
        TypePtr t;
        if (s.type) {
            t = program->binding_type(*s.type, s.location, false, contract());
        } else {
            const Typed it = typed(*s.expr);
            t = it.literal ? SemType::uint(256) : it.type;
        }
        RuleLog log;
        size_of(*t, &log);
        Value v;
        if (t->kind() == TypeKind::Ref) {
            if (s.expr) {
                v = eval_as(*s.expr, t);
            } else if (t->pointee() == Location::Storage) {
                warn("uninitialized storage pointer '" + s.name + "' aliases storage slot 0", s.span);
                v = Value::of(0);
            } else {
                v = Value::of(new_memory_region(Bytes(size_of(*t->inner()), 0)));
            }
        } else {
            v = s.expr ? eval_as(*s.expr, t) : zero_value(*t);
        }
        const ByteAddr addr = cfg().memory.fr(s.name, t, &s);
        store(Place{addr, Location::Memory}, *t, v, &log);
        emit("VD2", &log);
    }

    void exec_return(const Stmt& s) {
        if (frames.empty() || !frame().fn) throw Error(ErrorKind::ReturnOutsideFunction, "return outside of a function", s.span);
        const FunctionInfo& f = *frame().fn;
        if (s.expr) {
            if (!f.ret) throw Error(ErrorKind::TypeError, "function does not return a value", s.span);
            RuleLog log;
            const TypePtr& rt = f.ret->type;
            if (rt->kind() == TypeKind::Ref) {
                const Value v = eval_as(*s.expr, rt->inner());
                const Binding* b = cfg().memory.lookup(f.ret->name);
                const Place region = deref_place(read_word(Place{b->addr, Location::Memory}), Location::Memory);
                store(region, *rt->inner(), v, &log);
            } else {
                const Value v = eval_as(*s.expr, rt);
                const Binding* b = cfg().memory.lookup(f.ret->name);
                store(Place{b->addr, Location::Memory}, *rt, v, &log);
            }
            emit("RETURN", &log);
        } else {
            emit("RETURN");
        }
    }

    Word exec_push(const Expr& e) {
        RuleLog log;
        const Typed bt = typed(*e.base, &log);
        const SemType& B = *bt.type;
        const SemType& I = deref(B);
        const Value v = eval_as(*e.args[0], I.elem());
        const Place base = base_place(*e.base, B);
        const Word len = read_word(base);
        const Word p = slot_of(base);
        const Word slot = slot_of_dyn(p, len * stride_slots(*I.elem()));
        store(Place{slot_to_addr(slot), Location::Storage}, *I.elem(), v, &log);
        const Bytes32 nl = to_bytes32(len + 1);
        write(base, Bytes(nl.begin(), nl.end()));
        register_region("dyn", *e.base, p, decimal(len), slot, I.elem());
        emit("PUSH", &log);
        return len + 1;
    }

    // ---- calls ------------------------------------------------------------

    static std::string display_name(const FunctionInfo& f) {
        return f.kind == FunctionKind::Fallback ? "fallback" : f.name;
    }

    /// Argument values for `f`: memory-located parameters receive a copy of
    /// the argument's image, storage pointers its address.
    std::vector<Value> eval_args(const FunctionInfo& f, const std::vector<ExprPtr>& args, const Span& site) {
        if (args.size() != f.params.size())
            throw Error(ErrorKind::TypeError,
                        "function '" + f.name + "' expects " + std::to_string(f.params.size()) + " arguments", site);
        std::vector<Value> out;
        for (std::size_t i = 0; i < args.size(); ++i) {
            const TypePtr& pt = f.params[i].type;
            if (pt->kind() == TypeKind::Ref && pt->pointee() == Location::Memory) out.push_back(Value::blob(image_for(*args[i], *pt->inner())));
            else out.push_back(eval_as(*args[i], pt));
        }
        return out;
    }

    void bind(const std::string& name, const TypePtr& t, Value v, const void* decl) {
        RuleLog log;
        size_of(*t, &log);
        if (t->kind() == TypeKind::Ref && t->pointee() == Location::Memory) {
            Bytes img = v.bytes.empty() ? Bytes(size_of(*t->inner()), 0) : std::move(v.bytes);
            v = Value::of(new_memory_region(img));
        }
        const ByteAddr addr = cfg().memory.fr(name, t, decl);
        store(Place{addr, Location::Memory}, *t, v, &log);
        emit("VD2", &log);
    }

    std::optional<Value> invoke(const Address& self_addr, const ContractInfo& c, const FunctionInfo& f,
                                std::vector<Value> args, const std::string& rule, const RuleLog* site = nullptr) {
        if (frames.size() >= options.max_call_depth)
            throw Error(ErrorKind::CallDepth, "call depth limit of " + std::to_string(options.max_call_depth) + " reached");
        frames.push_back(Frame{self_addr, &c, &f, display_name(f)});
        Config& conf = cfg();
        conf.memory.push_scope();
        RuleLog log = site ? *site : RuleLog{};
        for (const auto& prm : f.params) size_of(*prm.type, &log);
        if (f.ret) size_of(*f.ret->type, &log);
        emit(rule, &log);
        for (std::size_t i = 0; i < args.size(); ++i) {
            const ParamInfo& prm = f.params[i];
            const std::string name = prm.name.empty() ? "$arg" + std::to_string(i) : prm.name;
            bind(name, prm.type, std::move(args[i]), &prm);
        }
        if (f.ret) bind(f.ret->name, f.ret->type, zero_value(*f.ret->type), &*f.ret);
        bool run = true;
        if (f.guard) {
            run = rvalue(*f.guard).word != 0;
            emit(run ? "COND1" : "COND2");
        }
        if (run) exec(*f.body);
        std::optional<Value> result;
        if (f.ret) {
            const Binding* b = cfg().memory.lookup(f.ret->name);
            const TypePtr& rt = f.ret->type;
            if (rt->kind() == TypeKind::Ref) {
                const Place region = deref_place(read_word(Place{b->addr, Location::Memory}), Location::Memory);
                result = load(region, *rt->inner());
            } else {
                result = load(Place{b->addr, Location::Memory}, *rt);
            }
        }
        cfg().memory.pop_scope();
        frames.pop_back();
        return result;
    }

    std::optional<Value> call_internal(const Expr& e, bool statement) {
        const FunctionInfo& f = *contract().function(e.name);
        RuleLog site;
        typed(e, &site);
        std::vector<Value> args = eval_args(f, e.args, e.span);
        return invoke(self(), contract(), f, std::move(args), statement ? "I-FUN" : "E-FUN", &site);
    }

    void transfer(const Address& from, const Address& to, const Word& amount) {
        if (amount == 0) return;
        const Word have = chain.balance_of(from);
        if (have < amount)
            throw Error(ErrorKind::InsufficientBalance,
                        hex_address(from) + " has " + decimal(have) + " wei, needs " + decimal(amount));
        chain.set_balance(from, have - amount);
        const Word dest = chain.balance_of(to);
        if (dest + amount < dest) throw Error(ErrorKind::RangeError, "balance overflow");
        chain.set_balance(to, dest + amount);
    }

    std::optional<Value> enter_external(const Address& target, const ContractInfo& c, const FunctionInfo* f,
                                        std::vector<Value> args, const Word& m, const Word& n, const std::string& rule,
                                        const std::string& kind, const RuleLog* site = nullptr) {
        const Address caller = self();
        if (frames.size() >= options.max_call_depth)
            throw Error(ErrorKind::CallDepth, "call depth limit of " + std::to_string(options.max_call_depth) + " reached");
        transfer(caller, target, m);
        instance(target).config.omega.push_back(CallerContext{caller, chain.msg, frames.size()});
        chain.msg_stack.push_back(chain.msg);
        chain.msg = Msg{caller, m, n};
        const std::string fname = f ? display_name(*f) : "fallback";
        TraceEvent& ev = emit_at(target, fname, rule, site);
        ev.call = TraceCall{kind, caller, target, fname, m, n};
        ev.value = m;
        std::optional<Value> result;
        if (f) result = invoke(target, c, *f, std::move(args), f->ret ? "E-FUN" : "I-FUN");
        emit_at(target, fname, "SKIP2");
        instance(target).config.omega.pop_back();
        chain.msg = chain.msg_stack.back();
        chain.msg_stack.pop_back();
        return result;
    }

    std::optional<Value> call_external(const Expr& e) {
        const Typed bt = typed(*e.base);
        const Address target = rvalue(*e.base).word;
        const Word m = e.value_expr ? rvalue(*e.value_expr).word : Word{0};
        const Word n = e.gas_expr ? rvalue(*e.gas_expr).word : chain.msg.gas;
        const Instance* inst = chain.find(target);
        if (!inst) throw Error(ErrorKind::UnknownAddress, "no contract instance at " + hex_address(target), e.span);
        const ContractInfo* actual = program->contract(inst->contract);
        const FunctionInfo* f = actual->function(e.name);
        if (!f)
            throw Error(ErrorKind::TypeError,
                        "instance " + hex_address(target) + " (" + actual->name + ") has no function '" + e.name + "'",
                        e.span);
        for (const auto& prm : f->params)
            if (prm.type->kind() == TypeKind::Ref && prm.type->pointee() == Location::Storage)
                throw Error(ErrorKind::TypeError, "storage pointers cannot be passed to another contract", e.span);
        std::vector<Value> args = eval_args(*f, e.args, e.span);
        RuleLog site;
        typed(e, &site);
        return enter_external(target, *actual, f, std::move(args), m, n, "E-FUN1", "function", &site);
    }

    bool call_fallback(const Expr& e) {
        const Address target = rvalue(*e.base).word;
        const Word m = rvalue(*e.value_expr).word;
        const Word n = e.gas_expr ? rvalue(*e.gas_expr).word : chain.msg.gas;
        const Address caller = self();
        if (chain.balance_of(caller) < m) {
            warn("low-level call from " + hex_address(caller) + " failed: balance " + decimal(chain.balance_of(caller)) +
                     " < " + decimal(m),
                 e.span);
            return false;
        }
        const Instance* inst = chain.find(target);
        if (!inst) {
            transfer(caller, target, m);
            return true;
        }
        const ContractInfo* c = program->contract(inst->contract);
        if (!c->fallback) warn("contract " + c->name + " has no fallback function; value transferred only", e.span);
        enter_external(target, *c, c->fallback ? &*c->fallback : nullptr, {}, m, n, "E-FUN2", "fallback");
        return true;
    }

    // ---- transactions --------------------------------------------------------

    void reset_tx() {
        events.clear();
        pending.clear();
        warnings.clear();
        frames.clear();
        steps = 0;
    }

    void end_tx() {
        for (auto& [a, inst] : chain.instances) inst.config.memory = MemoryState{};
        chain.msg = Msg{};
        chain.msg_stack.clear();
        frames.clear();
    }

    template <typename Body>
    TxResult atomically(Body&& body) {
        Chain snapshot = chain;
        const std::uint64_t seq_before = seq;
        reset_tx();
        TxResult r;
        try {
            run_with_large_stack([&] { body(r); });
            end_tx();
            r.events = events;
            trace.insert(trace.end(), events.begin(), events.end());
        } catch (const Error& err) {
            chain = std::move(snapshot);
            ++chain.tx_count;
            frames.clear();
            r.ok = false;
            r.error = err.kind();
            r.message = err.what();
            r.span = err.span();
            r.events = std::move(events);
            (void)seq_before;
        }
        r.warnings = warnings;
        events.clear();
        return r;
    }

    std::vector<Value> literal_args(const FunctionInfo& f, const std::vector<ExprPtr>& args) {
        return eval_args(f, args, Span{});
    }

    TxResult deploy(const std::string& cname, const std::vector<ExprPtr>& args, const Address& from, const Word& value,
                    const Word& gas) {
        return atomically([&](TxResult& r) {
            ++chain.tx_count;
            const ContractInfo* c = program->contract(cname);
            if (!c) throw Error(ErrorKind::UnknownIdentifier, "unknown contract '" + cname + "'");
            const Address addr = chain.next_address();
            ++chain.deployed;
            chain.instances.emplace(addr, Instance{cname, Config{}, 0});
            r.address = addr;
            chain.msg = Msg{from, value, gas};
            transfer(from, addr, value);
            const std::string fname = c->constructor ? c->name : "<init>";
            frames.push_back(Frame{addr, c, nullptr, fname});
            TraceEvent& ev = emit("TX");
            ev.call = TraceCall{"deploy", from, addr, cname, value, gas};
            ev.value = value;
            for (const auto& v : c->state_vars) {
                RuleLog log;
                StorageState& st = cfg().storage;
                const ByteAddr at = align_up(st.lambda, *v.type, &log);
                const Value init = v.init ? eval_as(*v.init, v.type) : zero_value(*v.type);
                StorageState& st2 = cfg().storage;
                if (st2.names.count(v.name))
                    throw Error(ErrorKind::DuplicateDeclaration, "'" + v.name + "' is already declared", v.span);
                st2.names[v.name] = Binding{at, v.type, &v};
                st2.order.push_back(v.name);
                st2.lambda = bump(st2.lambda, *v.type, &log);
                if (v.init) store(Place{at, Location::Storage}, *v.type, init, &log);
                emit("VD1", &log);
            }
            if (c->constructor) {
                std::vector<Value> vals = literal_args(*c->constructor, args);
                invoke(addr, *c, *c->constructor, std::move(vals), "I-FUN");
            } else if (!args.empty()) {
                throw Error(ErrorKind::TypeError, "contract " + cname + " has no constructor taking arguments");
            }
            emit("SKIP1");
            frames.pop_back();
        });
    }

    TxResult transact(const TxRequest& tx) {
        return atomically([&](TxResult& r) {
            ++chain.tx_count;
            Instance& inst = instance(tx.to);
            const ContractInfo* c = program->contract(inst.contract);
            const FunctionInfo* f = tx.fn.empty() ? (c->fallback ? &*c->fallback : nullptr) : c->function(tx.fn);
            if (!f && !tx.fn.empty())
                throw Error(ErrorKind::UnknownIdentifier, "contract " + c->name + " has no function '" + tx.fn + "'");
            chain.msg = Msg{tx.from, tx.value, tx.gas};
            transfer(tx.from, tx.to, tx.value);
            const std::string fname = f ? display_name(*f) : "fallback";
            frames.push_back(Frame{tx.to, c, nullptr, fname});
            TraceEvent& ev = emit("TX");
            ev.call = TraceCall{"tx", tx.from, tx.to, fname, tx.value, tx.gas};
            ev.value = tx.value;
            if (f) {
                std::vector<Value> vals = literal_args(*f, tx.args);
                r.ret = invoke(tx.to, *c, *f, std::move(vals), f->ret ? "E-FUN" : "I-FUN");
                if (f->ret) r.ret_type = f->ret->type->kind() == TypeKind::Ref ? f->ret->type->inner() : f->ret->type;
            }
            emit("SKIP1");
            frames.pop_back();
        });
    }

    /// Runs `fn` in a scratch frame of `at` and restores the world after.
    template <typename Fn>
    auto scratch(const Address& at, Fn&& fn) {
        Chain snapshot = chain;
        const std::uint64_t seq_before = seq;
        reset_tx();
        decltype(fn()) out{};
        std::exception_ptr error;
        try {
            run_with_large_stack([&] {
                Instance& inst = instance(at);
                frames.push_back(Frame{at, program->contract(inst.contract), nullptr, "<eval>"});
                cfg().memory.push_scope();
                out = fn();
            });
        } catch (...) {
            error = std::current_exception();
        }
        chain = std::move(snapshot);
        seq = seq_before;
        reset_tx();
        if (error) std::rethrow_exception(error);
        return out;
    }
};

Interpreter::Interpreter(std::shared_ptr<const Program> program, Options options)
    : impl_(std::make_unique<Impl>(std::move(program), options)) {}
Interpreter::~Interpreter() = default;
Interpreter::Interpreter(Interpreter&&) noexcept = default;
Interpreter& Interpreter::operator=(Interpreter&&) noexcept = default;

const Program& Interpreter::program() const noexcept { return *impl_->program; }
const Options& Interpreter::options() const noexcept { return impl_->options; }
void Interpreter::set_options(const Options& options) noexcept { impl_->options = options; }
Chain& Interpreter::chain() noexcept { return impl_->chain; }
const Chain& Interpreter::chain() const noexcept { return impl_->chain; }
const std::vector<TraceEvent>& Interpreter::trace() const noexcept { return impl_->trace; }

TxResult Interpreter::deploy(const std::string& contract, const std::vector<ExprPtr>& args, const Address& from,
                             const Word& value, const Word& gas) {
    return impl_->deploy(contract, args, from, value, gas);
}

TxResult Interpreter::transact(const TxRequest& tx) { return impl_->transact(tx); }

void Interpreter::fund(const Address& who, const Word& amount) {
    Chain& c = impl_->chain;
    const Word have = c.balance_of(who);
    if (have + amount < have) throw Error(ErrorKind::RangeError, "balance overflow");
    c.set_balance(who, have + amount);
}

std::pair<Value, TypePtr> Interpreter::evaluate(const Address& at, const Expr& e,
                                                const std::vector<std::pair<std::string, Address>>& locals) {
    Impl& im = *impl_;
    return im.scratch(at, [&]() -> std::pair<Value, TypePtr> {
        for (const auto& [name, addr] : locals) {
            if (im.contract().state_var(name)) continue;
            const ByteAddr cell = im.cfg().memory.fr(name, SemType::address());
            im.store(Place{cell, Location::Memory}, *SemType::address(), Value::of(addr));
        }
        if (e.kind == ExprKind::Ident && e.name == "balance" && !im.contract().state_var("balance"))
            return {Value::of(im.chain.balance_of(at)), SemType::uint(256)};
        const Typed t = im.typed(e);
        if (!t.type) throw Error(ErrorKind::TypeError, "expression has no value", e.span);
        if (t.type->kind() == TypeKind::Ref) {
            const Value ptr = im.rvalue(e);
            const SemType& inner = *t.type->inner();
            return {im.load(Impl::deref_place(ptr.word, t.type->pointee()), inner), t.type->inner()};
        }
        TypePtr rt = t.literal ? SemType::uint(256) : t.type;
        return {im.rvalue(e), rt};
    });
}

Value Interpreter::literal_value(const Address& at, const Expr& e, const TypePtr& t) {
    Impl& im = *impl_;
    return im.scratch(at, [&]() -> Value {
        if (t->kind() == TypeKind::StaticArray || t->kind() == TypeKind::Struct) return Value::blob(im.image_for(e, *t));
        return im.eval_as(e, t);
    });
}

Value Interpreter::read_state_var(const Address& at, const std::string& name) {
    Impl& im = *impl_;
    Instance& inst = im.instance(at);
    auto it = inst.config.storage.names.find(name);
    if (it == inst.config.storage.names.end())
        throw Error(ErrorKind::UnknownIdentifier, "no state variable '" + name + "'");
    const Binding b = it->second;
    return im.scratch(at, [&]() -> Value { return im.load(Place{b.addr, Location::Storage}, *b.type); });
}

}  // namespace solsem
