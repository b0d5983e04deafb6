#pragma once

#include <optional>
#include <set>
#include <string>

#include "tllc/logical.hpp"

namespace tllc {

// What a checked term consumed. Variables are identified by context level.
struct Usage {
    std::set<std::size_t> linear;
    std::set<std::size_t> unrestricted;
    std::set<ChannelId> channels;
};

struct Checked {
    Term type;
    Term term;  // elaborated
    Usage usage;
};

class ProgramChecker {
public:
    ProgramChecker(std::size_t fuel, const ChannelTypes& theta) : logic_(fuel, &theta), theta_(theta) {}

    Checked synth(TypingContext& ctx, const Term& m);
    Checked check(TypingContext& ctx, const Term& m, const Term& expected);
    LogicalChecker& logic() noexcept { return logic_; }

private:
    Checked lambda(TypingContext& ctx, const Term& m, const Term* codomain);
    Checked pair_against(TypingContext& ctx, const Term& m, const Term& expected);
    Checked bind(TypingContext& ctx, const Term& m, const Term* expected);
    Usage join(Usage a, const Usage& b, const TypingContext& ctx, const Node* at) const;
    // Discharges the innermost binder from `u`, reporting an unused linear one.
    void close_binder(Usage& u, const TypingContext& ctx, const Node* at) const;

    LogicalChecker logic_;
    const ChannelTypes& theta_;
};

struct UsageReport {
    std::set<std::string> used_linear;
    std::set<ChannelId> used_channels;
    std::set<std::string> used_unrestricted;
};

struct ProgramResult {
    Term type;
    Term term;
    UsageReport usage;
};

ChannelTypes channel_types(const ChannelContext& theta);

// Θ; Γ; Δ ⊢ m : A. Every linear entry of Δ and every channel of Θ must be
// consumed exactly once.
ProgramResult check_program(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta,
                            const Term& m, std::size_t fuel = default_fuel);
ProgramResult check_program_against(const ChannelContext& theta, const LogicalContext& gamma,
                                    const ProgramContext& delta, const Term& m, const Term& expected,
                                    std::size_t fuel = default_fuel);

// ε; ε; ε ⊢ m : C(unit). Returns the elaborated term.
Term check_closed_main(const Term& m, std::size_t fuel = default_fuel);

// Infers the logical type and checks it agrees with the program type.
Term lift_to_logical(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta,
                     const Term& m, std::size_t fuel = default_fuel);

}  // namespace tllc
