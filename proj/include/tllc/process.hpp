#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tllc/eval.hpp"
#include "tllc/reduction.hpp"
#include "tllc/term.hpp"

namespace tllc {

// νcd with the live protocol: ch_end : ch<protocol>, hc_end : hc<protocol>.
struct Scope {
    ChannelId ch_end;
    ChannelId hc_end;
    Term protocol;  // Hole in erased configurations
};

// Canonical configuration: scopes sorted by ch_end, procs sorted, finished
// processes dropped. This representation is the quotient by congruence up to
// channel renaming.
struct Configuration {
    std::vector<Scope> scopes;
    std::vector<Term> procs;
    ChannelId next_channel = 0;
    bool erased = false;
};

// A configuration as written, before canonicalization.
struct RawConfig {
    struct Restrict;
    using Par = std::vector<RawConfig>;
    std::variant<Term, Par, std::shared_ptr<Restrict>> node;
};
struct RawConfig::Restrict {
    ChannelId ch_end;
    ChannelId hc_end;
    Term protocol;
    RawConfig body;
};

RawConfig raw_proc(Term m);
RawConfig raw_par(std::vector<RawConfig> parts);
RawConfig raw_restrict(ChannelId ch_end, ChannelId hc_end, Term protocol, RawConfig body);

// Throws ScopeCapture when a channel escapes its binder.
Configuration canonicalize(const RawConfig& raw);
void normalize(Configuration& c);
Configuration singleton(const Term& main);

bool congruent(const Configuration& a, const Configuration& b);

enum class CommOp { Fork, Send, SendGhost, Recv, RecvGhost, Close, Wait };

// The suspended operation at the head of a thunk value.
struct CommHead {
    CommOp op;
    EvalContext context;
    Term head;
    ChannelId channel = 0;  // unused for Fork
    Term payload;           // Send and SendGhost
};

// Empty unless `m` is a thunk whose head acts on a channel literal (or forks).
std::optional<CommHead> comm_head(const Term& m);

// Receiver-side Sigma type for a message moving along `protocol`, seen from
// the channel end `ch_side` (true for the ch end).
Term payload_sigma(const Term& action, bool ch_side);

// Typestate after sending `payload` on an end; checks the action direction.
Term advance_protocol(const Term& protocol, const Term& payload, bool ghost, bool sender_is_ch, std::size_t fuel,
                      Term* action = nullptr);

enum class RuleKind { Expr, Fork, End, Com, ComGhost };
const char* to_string(RuleKind r);

// For End/Com/ComGhost `proc` is the closer/sender and `peer` the waiter/receiver.
struct Redex {
    RuleKind rule;
    std::size_t proc = 0;
    std::size_t peer = 0;
};

std::vector<Redex> enabled_redexes(const Configuration& c);

enum class PayloadKind { None, Real, Ghost };

struct StepInfo {
    RuleKind rule = RuleKind::Expr;
    std::optional<std::pair<ChannelId, ChannelId>> chans;  // (ch_end, hc_end)
    PayloadKind payload_kind = PayloadKind::None;
    Term payload;
    std::string payload_text;
};

Configuration apply_redex(const Configuration& c, const Redex& r, std::size_t fuel = default_fuel,
                          StepInfo* info = nullptr);

void type_configuration(const Configuration& c, std::size_t fuel = default_fuel);

// Owner process of every live channel end; throws SharedChannel.
std::vector<std::pair<ChannelId, std::size_t>> channel_owners(const Configuration& c);

// True when the graph "process -- scope -- process" has no cycle.
bool ownership_acyclic(const Configuration& c);

std::string format_configuration(const Configuration& c);

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t max_steps = 10000;
    bool recheck = false;
    std::size_t fuel = default_fuel;
};

enum class Outcome { Done, Deadlock, Budget };
const char* to_string(Outcome o);

struct RunResult {
    Outcome outcome = Outcome::Done;
    std::vector<StepInfo> steps;
    Configuration final_config;
    std::vector<std::string> transcript;  // real payloads, in order
};

RunResult run(const Configuration& c0, const RunOptions& opts);

std::string format_step(std::size_t n, const StepInfo& s);
std::string format_trace(const RunResult& r);

}  // namespace tllc
