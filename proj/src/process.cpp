#include "tllc/process.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "tllc/error.hpp"
#include "tllc/logical.hpp"
#include "tllc/print.hpp"
#include "tllc/program.hpp"
#include "tllc/values.hpp"

namespace tllc {

const char* to_string(RuleKind r) {
    switch (r) {
    case RuleKind::Expr: return "Expr";
    case RuleKind::Fork: return "Fork";
    case RuleKind::End: return "End";
    case RuleKind::Com: return "Com";
    case RuleKind::ComGhost: return "ComGhost";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::Done: return "done";
    case Outcome::Deadlock: return "deadlock";
    case Outcome::Budget: return "budget";
    }
    return "?";
}

RawConfig raw_proc(Term m) { return RawConfig{std::move(m)}; }
RawConfig raw_par(std::vector<RawConfig> parts) { return RawConfig{std::move(parts)}; }
RawConfig raw_restrict(ChannelId ch_end, ChannelId hc_end, Term protocol, RawConfig body) {
    return RawConfig{std::make_shared<RawConfig::Restrict>(
        RawConfig::Restrict{ch_end, hc_end, std::move(protocol), std::move(body)})};
}

namespace {

bool is_finished(const Term& t) { return t.kind() == Kind::Return && t.kid(0).kind() == Kind::UnitVal; }

void collect(const RawConfig& raw, std::set<ChannelId>& bound, std::set<ChannelId>& declared, Configuration& out) {
    if (const Term* m = std::get_if<Term>(&raw.node)) {
        for (ChannelId c : free_channels(*m))
            if (!bound.count(c)) fail(ErrorCode::ScopeCapture, "channel #" + std::to_string(c) + " escapes its scope");
        out.procs.push_back(*m);
    } else if (const auto* par = std::get_if<RawConfig::Par>(&raw.node)) {
        for (const RawConfig& p : *par) collect(p, bound, declared, out);
    } else {
        const auto& r = *std::get<std::shared_ptr<RawConfig::Restrict>>(raw.node);
        if (r.ch_end == r.hc_end || !declared.insert(r.ch_end).second || !declared.insert(r.hc_end).second)
            fail(ErrorCode::ScopeCapture, "channel bound twice in scope #" + std::to_string(r.ch_end));
        out.scopes.push_back({r.ch_end, r.hc_end, r.protocol});
        bound.insert(r.ch_end);
        bound.insert(r.hc_end);
        collect(r.body, bound, declared, out);
        bound.erase(r.ch_end);
        bound.erase(r.hc_end);
    }
}

}  // namespace

void normalize(Configuration& c) {
    c.procs.erase(std::remove_if(c.procs.begin(), c.procs.end(), is_finished), c.procs.end());
    std::sort(c.procs.begin(), c.procs.end(), TermLess{});
    std::sort(c.scopes.begin(), c.scopes.end(),
              [](const Scope& a, const Scope& b) { return a.ch_end < b.ch_end; });
}

Configuration canonicalize(const RawConfig& raw) {
    Configuration out;
    std::set<ChannelId> bound, declared;
    collect(raw, bound, declared, out);
    ChannelId next = 0;
    for (ChannelId c : declared) next = std::max(next, c + 1);
    out.next_channel = next;
    normalize(out);
    return out;
}

Configuration singleton(const Term& main) { return canonicalize(raw_proc(main)); }

namespace {

Term anonymize(const Term& t) {
    return rename_channels_fn(t, [](ChannelId, const void*) -> ChannelId { return 0; }, nullptr);
}

void channel_sequence(const Term& t, std::vector<ChannelId>& out) {
    if (!t->has_channels) return;
    if (t.kind() == Kind::ChanLit) {
        out.push_back(t.channel());
        return;
    }
    for (const Term& k : t->kids) channel_sequence(k, out);
}

struct Matcher {
    const Configuration& a;
    const Configuration& b;
    std::vector<Term> anon_a, anon_b;
    std::vector<std::vector<ChannelId>> seq_a, seq_b;
    std::map<ChannelId, ChannelId> ab, ba;
    std::vector<bool> used;

    bool scopes_match() {
        std::map<ChannelId, ChannelId> fwd = ab;
        std::vector<bool> taken(b.scopes.size(), false);
        for (const Scope& s : a.scopes) {
            bool found = false;
            for (std::size_t j = 0; j < b.scopes.size() && !found; ++j) {
                const Scope& t = b.scopes[j];
                if (taken[j] || !alpha_eq(s.protocol, t.protocol)) continue;
                auto ok = [&](ChannelId x, ChannelId y) {
                    auto it = fwd.find(x);
                    return it == fwd.end() ? !ba.count(y) : it->second == y;
                };
                if (ok(s.ch_end, t.ch_end) && ok(s.hc_end, t.hc_end)) {
                    taken[j] = true;
                    found = true;
                }
            }
            if (!found) return false;
        }
        return true;
    }

    bool match(std::size_t i) {
        if (i == a.procs.size()) return scopes_match();
        for (std::size_t j = 0; j < b.procs.size(); ++j) {
            if (used[j] || seq_a[i].size() != seq_b[j].size() || !alpha_eq(anon_a[i], anon_b[j])) continue;
            std::vector<ChannelId> added;
            bool ok = true;
            for (std::size_t k = 0; k < seq_a[i].size() && ok; ++k) {
                ChannelId x = seq_a[i][k], y = seq_b[j][k];
                auto fx = ab.find(x);
                auto fy = ba.find(y);
                if (fx != ab.end() || fy != ba.end()) {
                    ok = fx != ab.end() && fy != ba.end() && fx->second == y && fy->second == x;
                } else {
                    ab[x] = y;
                    ba[y] = x;
                    added.push_back(x);
                }
            }
            if (ok) {
                used[j] = true;
                if (match(i + 1)) return true;
                used[j] = false;
            }
            for (ChannelId x : added) {
                ba.erase(ab[x]);
                ab.erase(x);
            }
        }
        return false;
    }
};

}  // namespace

bool congruent(const Configuration& a, const Configuration& b) {
    if (a.erased != b.erased || a.procs.size() != b.procs.size() || a.scopes.size() != b.scopes.size()) return false;
    Matcher m{a, b, {}, {}, {}, {}, {}, {}, std::vector<bool>(b.procs.size(), false)};
    for (const Term& p : a.procs) {
        m.anon_a.push_back(anonymize(p));
        m.seq_a.emplace_back();
        channel_sequence(p, m.seq_a.back());
    }
    for (const Term& p : b.procs) {
        m.anon_b.push_back(anonymize(p));
        m.seq_b.emplace_back();
        channel_sequence(p, m.seq_b.back());
    }
    return m.match(0);
}

std::optional<CommHead> comm_head(const Term& m) {
    if (!is_value(m) || !is_thunk(m)) return std::nullopt;
    Decomposition d = decompose(m);
    CommHead h{CommOp::Fork, std::move(d.context), d.head, 0, {}};
    const Term& t = h.head;
    auto channel_of = [&](const Term& c) {
        if (c.kind() != Kind::ChanLit) return false;
        h.channel = c.channel();
        return true;
    };
    switch (t.kind()) {
    case Kind::Fork:
        return h;
    case Kind::AppExp:
        h.op = CommOp::Send;
        h.payload = t.kid(1);
        if (!channel_of(t.kid(0).kid(0))) return std::nullopt;
        return h;
    case Kind::AppImp:
        h.op = CommOp::SendGhost;
        h.payload = t.kid(1);
        if (!channel_of(t.kid(0).kid(0))) return std::nullopt;
        return h;
    case Kind::RecvOp: h.op = CommOp::Recv; break;
    case Kind::RecvGhostOp: h.op = CommOp::RecvGhost; break;
    case Kind::CloseOp: h.op = CommOp::Close; break;
    case Kind::WaitOp: h.op = CommOp::Wait; break;
    default: return std::nullopt;
    }
    if (!channel_of(t.kid(0))) return std::nullopt;
    return h;
}

Term payload_sigma(const Term& action, bool ch_side) {
    Term rest = ch_side ? mk::ch(action.kid(1)) : mk::hc(action.kid(1));
    return action.kind() == Kind::ActExp ? mk::sig_exp(Sort::L, action.name(), action.kid(0), rest)
                                         : mk::sig_imp(Sort::L, action.name(), action.kid(0), rest);
}

Term advance_protocol(const Term& protocol, const Term& payload, bool ghost, bool sender_is_ch, std::size_t fuel,
                      Term* action) {
    Term p = whnf(protocol, fuel);
    Kind want = ghost ? Kind::ActImp : Kind::ActExp;
    // the ch end sends on !, the hc end sends on ?
    Polarity dir = sender_is_ch ? Polarity::Send : Polarity::Recv;
    if (p.kind() != want || p.polarity() != dir)
        fail(ErrorCode::InternalInvariantViolation,
             "typestate " + pretty(protocol) + " does not allow this " + (ghost ? "ghost " : "") + "message");
    if (action) *action = p;
    return instantiate(p.kid(1), payload);
}

namespace {

const Scope* scope_of(const Configuration& c, ChannelId x) {
    for (const Scope& s : c.scopes)
        if (s.ch_end == x || s.hc_end == x) return &s;
    return nullptr;
}

ChannelId peer_of(const Scope& s, ChannelId x) { return s.ch_end == x ? s.hc_end : s.ch_end; }

}  // namespace

std::vector<Redex> enabled_redexes(const Configuration& c) {
    std::vector<Redex> out;
    std::vector<std::optional<CommHead>> heads(c.procs.size());
    std::map<ChannelId, std::size_t> waiting;  // channel -> proc blocked on it
    for (std::size_t i = 0; i < c.procs.size(); ++i) {
        StepResult r = detail::step(c.procs[i], c.erased);
        if (r.kind == StepKind::Stepped) {
            out.push_back({RuleKind::Expr, i, i});
            continue;
        }
        heads[i] = comm_head(c.procs[i]);
        if (!heads[i]) continue;
        if (heads[i]->op == CommOp::Fork)
            out.push_back({RuleKind::Fork, i, i});
        else
            waiting[heads[i]->channel] = i;
    }
    for (std::size_t i = 0; i < c.procs.size(); ++i) {
        if (!heads[i] || heads[i]->op == CommOp::Fork) continue;
        const CommOp op = heads[i]->op;
        if (op != CommOp::Send && op != CommOp::SendGhost && op != CommOp::Close) continue;
        const Scope* s = scope_of(c, heads[i]->channel);
        if (!s) continue;
        auto it = waiting.find(peer_of(*s, heads[i]->channel));
        if (it == waiting.end()) continue;
        const CommOp other = heads[it->second]->op;
        if (op == CommOp::Send && other == CommOp::Recv)
            out.push_back({RuleKind::Com, i, it->second});
        else if (op == CommOp::SendGhost && other == CommOp::RecvGhost)
            out.push_back({RuleKind::ComGhost, i, it->second});
        else if (op == CommOp::Close && other == CommOp::Wait)
            out.push_back({RuleKind::End, i, it->second});
    }
    return out;
}

Configuration apply_redex(const Configuration& c, const Redex& r, std::size_t fuel, StepInfo* info) {
    Configuration next = c;
    StepInfo local;
    StepInfo& si = info ? *info : local;
    si = StepInfo{};
    si.rule = r.rule;
    if (r.proc >= c.procs.size() || r.peer >= c.procs.size())
        fail(ErrorCode::InternalInvariantViolation, "redex refers to a missing process");

    switch (r.rule) {
    case RuleKind::Expr: {
        StepResult s = detail::step(c.procs[r.proc], c.erased);
        if (s.kind != StepKind::Stepped) fail(ErrorCode::InternalInvariantViolation, "Expr redex does not step");
        next.procs[r.proc] = s.term;
        break;
    }
    case RuleKind::Fork: {
        auto h = comm_head(c.procs[r.proc]);
        if (!h || h->op != CommOp::Fork) fail(ErrorCode::InternalInvariantViolation, "Fork redex without fork");
        const Term& f = h->head;
        const ChannelId parent = next.next_channel++;
        const ChannelId child = next.next_channel++;
        Term protocol = f.kid(0).kind() == Kind::ChT ? f.kid(0).kid(0) : mk::hole();
        next.scopes.push_back({child, parent, protocol});
        next.procs[r.proc] = plug(h->context, mk::ret(mk::chan(parent)));
        next.procs.push_back(instantiate(f.kid(1), mk::chan(child)));
        si.chans = std::make_pair(child, parent);
        break;
    }
    case RuleKind::End:
    case RuleKind::Com:
    case RuleKind::ComGhost: {
        auto a = comm_head(c.procs[r.proc]);
        auto b = comm_head(c.procs[r.peer]);
        if (!a || !b) fail(ErrorCode::InternalInvariantViolation, "communication redex without heads");
        const Scope* s = scope_of(c, a->channel);
        if (!s || peer_of(*s, a->channel) != b->channel)
            fail(ErrorCode::InternalInvariantViolation, "communication across unrelated channels");
        si.chans = std::make_pair(s->ch_end, s->hc_end);
        auto scope_it = std::find_if(next.scopes.begin(), next.scopes.end(),
                                     [&](const Scope& x) { return x.ch_end == s->ch_end; });
        if (r.rule == RuleKind::End) {
            next.procs[r.proc] = plug(a->context, mk::ret(mk::unit_val()));
            next.procs[r.peer] = plug(b->context, mk::ret(mk::unit_val()));
            next.scopes.erase(scope_it);
            break;
        }
        const bool ghost = r.rule == RuleKind::ComGhost;
        const bool sender_is_ch = a->channel == s->ch_end;
        Term sigma;
        if (!c.erased) {
            Term action;
            scope_it->protocol = advance_protocol(s->protocol, a->payload, ghost, sender_is_ch, fuel, &action);
            sigma = payload_sigma(action, !sender_is_ch);
        }
        Term pair = ghost ? mk::pair_imp(a->payload, mk::chan(b->channel), Sort::L)
                          : mk::pair_exp(a->payload, mk::chan(b->channel), Sort::L);
        if (sigma) pair = with_pair_type(pair, sigma);
        next.procs[r.proc] = plug(a->context, mk::ret(mk::chan(a->channel)));
        next.procs[r.peer] = plug(b->context, mk::ret(pair));
        si.payload = a->payload;
        si.payload_kind = ghost ? PayloadKind::Ghost : PayloadKind::Real;
        if (!ghost) si.payload_text = pretty(a->payload);
        break;
    }
    }
    normalize(next);
    return next;
}

std::vector<std::pair<ChannelId, std::size_t>> channel_owners(const Configuration& c) {
    std::map<ChannelId, std::size_t> owner;
    for (std::size_t i = 0; i < c.procs.size(); ++i)
        for (ChannelId ch : free_channels(c.procs[i]))
            if (!owner.emplace(ch, i).second)
                fail(ErrorCode::SharedChannel, "channel #" + std::to_string(ch) + " is held by two processes");
    return {owner.begin(), owner.end()};
}

void type_configuration(const Configuration& c, std::size_t fuel) {
    if (c.erased) fail(ErrorCode::InternalInvariantViolation, "erased configurations carry no types");
    ChannelTypes all;
    LogicalChecker logic(fuel);
    for (const Scope& s : c.scopes) {
        if (!is_closed(s.protocol))
            fail(ErrorCode::InternalInvariantViolation, "open typestate " + pretty(s.protocol));
        TypingContext empty;
        logic.check(empty, s.protocol, mk::proto());
        all[s.ch_end] = mk::ch(s.protocol);
        all[s.hc_end] = mk::hc(s.protocol);
    }
    auto owners = channel_owners(c);
    std::vector<ChannelContext> theta(c.procs.size());
    std::set<ChannelId> owned;
    for (const auto& [ch, proc] : owners) {
        auto it = all.find(ch);
        if (it == all.end()) fail(ErrorCode::UnboundChannel, "channel #" + std::to_string(ch) + " has no scope");
        theta[proc].push_back({ch, it->second});
        owned.insert(ch);
    }
    for (const auto& [ch, ty] : all)
        if (!owned.count(ch)) fail(ErrorCode::OrphanChannel, "channel #" + std::to_string(ch) + " has no owner");
    for (std::size_t i = 0; i < c.procs.size(); ++i)
        check_program_against(theta[i], {}, {}, c.procs[i], mk::c_type(mk::unit()), fuel);
}

bool ownership_acyclic(const Configuration& c) {
    std::vector<std::size_t> parent(c.procs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<ChannelId, std::size_t> owner;
    for (const auto& [ch, p] : channel_owners(c)) owner[ch] = p;
    for (const Scope& s : c.scopes) {
        auto a = owner.find(s.ch_end);
        auto b = owner.find(s.hc_end);
        if (a == owner.end() || b == owner.end()) continue;
        std::size_t x = find(a->second), y = find(b->second);
        if (x == y) return false;
        parent[x] = y;
    }
    return true;
}

std::string format_configuration(const Configuration& c) {
    std::ostringstream out;
    for (const Scope& s : c.scopes)
        out << "scope #" << s.ch_end << " #" << s.hc_end << " : " << pretty(s.protocol) << "\n";
    for (const Term& p : c.procs) out << "proc := " << pretty(p) << "\n";
    return out.str();
}

std::string format_step(std::size_t n, const StepInfo& s) {
    std::ostringstream out;
    out << "step=" << n << " rule=" << to_string(s.rule) << " chans=";
    if (s.chans)
        out << s.chans->first << "," << s.chans->second;
    else
        out << "-";
    out << " payload=";
    switch (s.payload_kind) {
    case PayloadKind::None: out << "-"; break;
    case PayloadKind::Ghost: out << "ghost"; break;
    case PayloadKind::Real: out << s.payload_text; break;
    }
    return out.str();
}

std::string format_trace(const RunResult& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.steps.size(); ++i) out << format_step(i + 1, r.steps[i]) << "\n";
    out << "result=" << to_string(r.outcome) << " steps=" << r.steps.size() << "\n";
    return out.str();
}

RunResult run(const Configuration& c0, const RunOptions& opts) {
    RunResult res;
    Configuration c = c0;
    std::mt19937_64 rng(opts.seed);
    for (;;) {
        if (c.procs.empty()) {
            res.outcome = Outcome::Done;
            break;
        }
        std::vector<Redex> rs = enabled_redexes(c);
        if (rs.empty()) {
            res.outcome = Outcome::Deadlock;
            break;
        }
        if (res.steps.size() >= opts.max_steps) {
            res.outcome = Outcome::Budget;
            break;
        }
        const Redex& r = rs[rng() % rs.size()];
        StepInfo info;
        c = apply_redex(c, r, opts.fuel, &info);
        if (info.payload_kind == PayloadKind::Real) res.transcript.push_back(info.payload_text);
        res.steps.push_back(std::move(info));
        if (opts.recheck) {
            try {
                type_configuration(c, opts.fuel);
            } catch (const KernelError& e) {
                fail(ErrorCode::FidelityViolation,
                     "configuration ill-typed after step " + std::to_string(res.steps.size()) + ": " + e.what());
            }
        }
    }
    res.final_config = std::move(c);
    return res;
}

}  // namespace tllc
