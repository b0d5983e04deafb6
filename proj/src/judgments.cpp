#include "tllc/judgments.hpp"

#include <algorithm>

#include "tllc/error.hpp"

namespace tllc {

bool sort_leq(Sort a, Sort b) noexcept { return a == Sort::U || b == Sort::L; }

ProgramContext ctx_merge(const ProgramContext& a, const ProgramContext& b) {
    ProgramContext out = a;
    for (const ProgramEntry& e : b) {
        auto it = std::find_if(a.begin(), a.end(), [&](const ProgramEntry& x) { return x.name == e.name; });
        if (it == a.end()) {
            out.push_back(e);
            continue;
        }
        if (it->sort == Sort::L && e.sort == Sort::L)
            fail(ErrorCode::OverlappingLinear, "linear entry '" + e.name + "' claimed by both contexts");
        if (it->sort != e.sort || !alpha_eq(it->type, e.type))
            fail(ErrorCode::MismatchedUnrestricted, "entry '" + e.name + "' differs between contexts");
    }
    return out;
}

ChannelContext ctx_merge(const ChannelContext& a, const ChannelContext& b) {
    ChannelContext out = a;
    for (const ChannelEntry& e : b) {
        bool clash = std::any_of(a.begin(), a.end(), [&](const ChannelEntry& x) { return x.channel == e.channel; });
        if (clash)
            fail(ErrorCode::OverlappingLinear, "channel #" + std::to_string(e.channel) + " claimed by both contexts");
        out.push_back(e);
    }
    return out;
}

bool restrict_ok(const ProgramContext& d, Sort s) noexcept {
    return s == Sort::L || std::all_of(d.begin(), d.end(), [](const ProgramEntry& e) { return e.sort == Sort::U; });
}

bool restrict_ok(const ChannelContext& d, Sort s) noexcept { return s == Sort::L || d.empty(); }

bool is_arity(const Term& t, const Term& end) {
    if (alpha_eq(t, end)) return true;
    if (t.kind() == Kind::PiExp || t.kind() == Kind::PiImp) return is_arity(t.kid(1), shift(end, 1));
    return false;
}

bool is_guarded(const Term& t, std::uint32_t x) {
    if (!occurs_free(t, x)) return true;
    switch (t.kind()) {
    case Kind::Var:
        return t.index() != x;
    case Kind::ActExp:
    case Kind::ActImp:
        // the continuation is behind the action
        return is_guarded(t.kid(0), x);
    default:
        for (std::size_t i = 0; i < t.arity(); ++i)
            if (!is_guarded(t.kid(i), x + binder_depth(t.kind(), i))) return false;
        return true;
    }
}

}  // namespace tllc
