#pragma once

#include "tllc/context.hpp"
#include "tllc/judgments.hpp"
#include "tllc/reduction.hpp"

namespace tllc {

// A checked term together with its elaborated form (pairs annotated with
// their Sigma type).
struct Typed {
    Term type;
    Term term;
};

struct Sorted {
    Sort sort = Sort::U;
    Term term;
};

class LogicalChecker {
public:
    explicit LogicalChecker(std::size_t fuel = default_fuel, const ChannelTypes* channels = nullptr)
        : fuel_(fuel), channels_(channels) {}

    Typed infer(TypingContext& ctx, const Term& m);
    Typed check(TypingContext& ctx, const Term& m, const Term& expected);
    Sorted sort_of(TypingContext& ctx, const Term& a);

    Term whnf(const Term& t) const;
    bool convertible(const Term& a, const Term& b) const;
    std::size_t fuel() const noexcept { return fuel_; }

    // Type of a session operator (send, recv, close, ...) applied to a term of
    // type `chan_type`. Shared with the program checker.
    Term session_op_type(Kind op, const Term& chan_type, const Node* at) const;
    // ch<A> -> A, with A checked against proto; throws unless `ann` is ch<_>.
    Term fork_protocol(TypingContext& ctx, const Term& ann, const Node* at);

    void mismatch(const TypingContext& ctx, const Term& expected, const Term& found, const Node* at) const;

private:
    Typed infer_pair(TypingContext& ctx, const Term& m);
    Typed check_pair(TypingContext& ctx, const Term& m, const Term& sig);

    std::size_t fuel_;
    const ChannelTypes* channels_;
};

Term infer_logical(const LogicalContext& gamma, const Term& m, std::size_t fuel = default_fuel);
Typed elaborate_logical(const LogicalContext& gamma, const Term& m, std::size_t fuel = default_fuel);
Sort sort_of(const LogicalContext& gamma, const Term& a, std::size_t fuel = default_fuel);
void check_logical_context(const LogicalContext& gamma, std::size_t fuel = default_fuel);

TypingContext logical_scope(const LogicalContext& gamma);

// motive[<x, y>/z] under the two pair binders; the motive is under z.
Term pair_motive(const Term& motive, const Term& sig);

}  // namespace tllc
