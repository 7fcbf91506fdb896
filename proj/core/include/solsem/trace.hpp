#pragma once

#include "solsem/numeric.hpp"
#include "solsem/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace solsem {

struct TraceWrite {
    Location space = Location::Storage;
    ByteAddr at;
    Bytes bytes;
};

/// An external call or value transfer started by E-FUN1 / E-FUN2 or by a
/// transaction entering a contract.
struct TraceCall {
    std::string kind;  // "tx", "function", "fallback", "deploy"
    Address from = 0;
    Address to = 0;
    std::string fn;
    Word value = 0;
    Word gas = 0;
};

/// One applied rule. `addr`/`fn` name the instance and function whose
/// configuration the rule rewrote.
struct TraceEvent {
    std::uint64_t seq = 0;
    std::string rule;
    Address addr = 0;
    std::string fn;
    std::vector<TraceWrite> writes;
    std::optional<TraceCall> call;
    std::optional<Word> value;
    std::size_t omega = 0;  // Ω depth of `addr` when the rule applied
    std::uint64_t tx = 0;
    std::vector<std::string> premises;  // sizing and typing rules consulted
};

/// Rule labels the engine can emit.
const std::vector<std::string>& all_rule_labels();

}  // namespace solsem
