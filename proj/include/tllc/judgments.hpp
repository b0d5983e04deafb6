#pragma once

#include <string>
#include <vector>

#include "tllc/term.hpp"

namespace tllc {

struct LogicalEntry {
    std::string name;
    Term type;
};
using LogicalContext = std::vector<LogicalEntry>;

struct ProgramEntry {
    std::string name;
    Term type;
    Sort sort;
};
using ProgramContext = std::vector<ProgramEntry>;

struct ChannelEntry {
    ChannelId channel;
    Term type;  // ch<A> or hc<A>, A closed
};
using ChannelContext = std::vector<ChannelEntry>;

bool sort_leq(Sort a, Sort b) noexcept;

// Throws OverlappingLinear or MismatchedUnrestricted.
ProgramContext ctx_merge(const ProgramContext& a, const ProgramContext& b);
ChannelContext ctx_merge(const ChannelContext& a, const ChannelContext& b);

bool restrict_ok(const ProgramContext& d, Sort s) noexcept;
bool restrict_ok(const ChannelContext& d, Sort s) noexcept;

bool is_arity(const Term& t, const Term& end);

// Every occurrence of the free index `x` in t sits inside the continuation of
// a protocol action.
bool is_guarded(const Term& t, std::uint32_t x);

}  // namespace tllc
