#include "tllc/spawn_tree.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tllc/error.hpp"
#include "tllc/print.hpp"
#include "tllc/program.hpp"

namespace tllc {

SpawnTree root_tree(const Term& main) {
    SpawnTree t;
    t.term = main;
    return t;
}

namespace {

Term own_type(const SpawnTree& t) { return t.own_is_ch ? mk::ch(t.protocol) : mk::hc(t.protocol); }
Term parent_side_type(const SpawnTree& t) { return t.own_is_ch ? mk::hc(t.protocol) : mk::ch(t.protocol); }

void flatten_into(const SpawnTree& t, Configuration& out) {
    out.procs.push_back(t.term);
    for (const SpawnTree& c : t.children) {
        if (c.own_is_ch)
            out.scopes.push_back({c.own_end, c.parent_end, c.protocol});
        else
            out.scopes.push_back({c.parent_end, c.own_end, c.protocol});
        flatten_into(c, out);
    }
    for (const SpawnTree& q : t.detached) flatten_into(q, out);
}

void validate_at(const SpawnTree& t, const std::string& path, std::size_t fuel, std::set<ChannelId>& seen) {
    ChannelContext theta;
    auto fresh = [&](ChannelId c) {
        if (!seen.insert(c).second)
            fail(ErrorCode::SharedChannel, path + ": channel #" + std::to_string(c) + " appears twice in the tree");
    };
    if (!t.root) {
        fresh(t.own_end);
        theta.push_back({t.own_end, own_type(t)});
    }
    for (const SpawnTree& c : t.children) {
        if (c.root) fail(ErrorCode::InternalInvariantViolation, path + ": a child is marked as a root");
        fresh(c.parent_end);
        theta.push_back({c.parent_end, parent_side_type(c)});
    }
    try {
        check_program_against(theta, {}, {}, t.term, mk::c_type(mk::unit()), fuel);
    } catch (const KernelError& e) {
        throw KernelError(e.code(), path + ": " + e.detail(), e.where());
    }
    for (std::size_t i = 0; i < t.children.size(); ++i)
        validate_at(t.children[i], path + "/child" + std::to_string(i), fuel, seen);
    for (std::size_t j = 0; j < t.detached.size(); ++j) {
        if (!t.detached[j].root) fail(ErrorCode::InternalInvariantViolation, path + ": a detached tree is not a root");
        validate_at(t.detached[j], path + "/detached" + std::to_string(j), fuel, seen);
    }
}

bool finished(const Term& t) { return t.kind() == Kind::Return && t.kid(0).kind() == Kind::UnitVal; }

bool dual(CommOp parent, CommOp child) {
    switch (parent) {
    case CommOp::Send: return child == CommOp::Recv;
    case CommOp::Recv: return child == CommOp::Send;
    case CommOp::SendGhost: return child == CommOp::RecvGhost;
    case CommOp::RecvGhost: return child == CommOp::SendGhost;
    case CommOp::Close: return child == CommOp::Wait;
    case CommOp::Wait: return child == CommOp::Close;
    case CommOp::Fork: return false;
    }
    return false;
}

// Moves the children whose parent end occurs in `chans` from `from` to `to`.
void reparent(std::vector<SpawnTree>& from, std::vector<SpawnTree>& to, const std::set<ChannelId>& chans) {
    auto keep = std::stable_partition(from.begin(), from.end(),
                                      [&](const SpawnTree& c) { return !chans.count(c.parent_end); });
    std::move(keep, from.end(), std::back_inserter(to));
    from.erase(keep, from.end());
}

class Scheduler {
public:
    Scheduler(ChannelId& next, std::mt19937_64& rng, std::size_t fuel) : next_(next), rng_(rng), fuel_(fuel) {}

    TreeStep step(SpawnTree& t) {
        const std::string prefix = t.root ? "Root-" : "Node-";

        std::vector<std::size_t> busy;
        for (std::size_t j = 0; j < t.detached.size(); ++j)
            if (!is_terminal(t.detached[j])) busy.push_back(j);
        if (!busy.empty()) {
            TreeStep s = step(t.detached[busy[rng_() % busy.size()]]);
            if (s.status != TreeStatus::Stepped) violation(t, "a detached tree neither steps nor terminates");
            return s;
        }

        StepResult r = cbv_step(t.term);
        if (r.kind == StepKind::Stepped) {
            t.term = r.term;
            return stepped(prefix + "Expr", RuleKind::Expr);
        }
        if (finished(t.term)) {
            if (t.root && t.children.empty()) return {TreeStatus::Terminal, {}, {}};
            violation(t, "finished term still linked to other processes");
        }

        auto head = comm_head(t.term);
        if (!head) violation(t, "term is stuck");
        if (head->op == CommOp::Fork) return fork(t, *head, prefix);
        if (!t.root && head->channel == t.own_end) return {TreeStatus::Poised, {}, {}};

        auto k = std::find_if(t.children.begin(), t.children.end(),
                              [&](const SpawnTree& c) { return c.parent_end == head->channel; });
        if (k == t.children.end()) violation(t, "acts on #" + std::to_string(head->channel) + " which links no child");
        std::size_t ki = static_cast<std::size_t>(k - t.children.begin());

        auto other = comm_head(k->term);
        if (other && other->op != CommOp::Fork && other->channel == k->own_end) {
            if (!dual(head->op, other->op)) violation(t, "parent and child disagree on the next action");
            return communicate(t, *head, ki, *other, prefix);
        }
        TreeStep s = step(*k);
        if (s.status != TreeStatus::Stepped) violation(t, "the child it waits on cannot move");
        return s;
    }

private:
    [[noreturn]] void violation(const SpawnTree& t, const std::string& why) {
        fail(ErrorCode::ProgressViolation, why + ": " + pretty(t.term));
    }

    TreeStep stepped(std::string rule, RuleKind kind) {
        TreeStep s;
        s.tree_rule = std::move(rule);
        s.info.rule = kind;
        return s;
    }

    TreeStep fork(SpawnTree& t, const CommHead& h, const std::string& prefix) {
        const Term& f = h.head;
        const ChannelId parent = next_++;
        const ChannelId child = next_++;
        SpawnTree c;
        c.root = false;
        c.term = instantiate(f.kid(1), mk::chan(child));
        c.parent_end = parent;
        c.own_end = child;
        c.own_is_ch = true;
        c.protocol = f.kid(0).kind() == Kind::ChT ? f.kid(0).kid(0) : mk::hole();
        reparent(t.children, c.children, free_channels(f.kid(1)));
        t.term = plug(h.context, mk::ret(mk::chan(parent)));
        t.children.push_back(std::move(c));
        TreeStep s = stepped(prefix + "Fork", RuleKind::Fork);
        s.info.chans = std::make_pair(child, parent);
        return s;
    }

    TreeStep communicate(SpawnTree& t, const CommHead& mine, std::size_t ki, const CommHead& theirs,
                         const std::string& prefix) {
        SpawnTree& k = t.children[ki];
        const ChannelId c_k = k.parent_end, d_k = k.own_end;
        const auto chans = k.own_is_ch ? std::make_pair(d_k, c_k) : std::make_pair(c_k, d_k);

        if (mine.op == CommOp::Close || mine.op == CommOp::Wait) {
            t.term = plug(mine.context, mk::ret(mk::unit_val()));
            SpawnTree q = std::move(k);
            t.children.erase(t.children.begin() + static_cast<std::ptrdiff_t>(ki));
            q.term = plug(theirs.context, mk::ret(mk::unit_val()));
            q.root = true;
            q.parent_end = q.own_end = 0;
            q.protocol = Term{};
            t.detached.push_back(std::move(q));
            TreeStep s = stepped(prefix + (mine.op == CommOp::Wait ? "Wait" : "Close"), RuleKind::End);
            s.info.chans = chans;
            return s;
        }

        const bool parent_sends = mine.op == CommOp::Send || mine.op == CommOp::SendGhost;
        const bool ghost = mine.op == CommOp::SendGhost || mine.op == CommOp::RecvGhost;
        const CommHead& sender = parent_sends ? mine : theirs;
        const Term v = sender.payload;
        // the child's end is ch exactly when the parent's is hc
        const bool sender_is_ch = parent_sends ? !k.own_is_ch : k.own_is_ch;
        Term action;
        Term next_protocol = advance_protocol(k.protocol, v, ghost, sender_is_ch, fuel_, &action);
        Term sigma = payload_sigma(action, !sender_is_ch);
        const ChannelId receiver_end = parent_sends ? d_k : c_k;
        Term pair = ghost ? mk::pair_imp(v, mk::chan(receiver_end), Sort::L)
                          : mk::pair_exp(v, mk::chan(receiver_end), Sort::L);
        pair = with_pair_type(pair, sigma);

        std::string rule;
        std::set<ChannelId> carried = ghost ? std::set<ChannelId>{} : free_channels(v);
        if (parent_sends && !t.root && carried.count(t.own_end)) {
            // The receiver takes over the parent link; the sender hangs below it.
            SpawnTree old = std::move(t);
            SpawnTree child = std::move(old.children[ki]);
            old.children.erase(old.children.begin() + static_cast<std::ptrdiff_t>(ki));

            SpawnTree demoted;
            demoted.root = false;
            demoted.term = plug(mine.context, mk::ret(mk::chan(c_k)));
            demoted.parent_end = d_k;
            demoted.own_end = c_k;
            demoted.own_is_ch = !child.own_is_ch;
            demoted.protocol = next_protocol;
            demoted.detached = std::move(old.detached);

            SpawnTree promoted;
            promoted.root = false;
            promoted.term = plug(theirs.context, mk::ret(pair));
            promoted.parent_end = old.parent_end;
            promoted.own_end = old.own_end;
            promoted.own_is_ch = old.own_is_ch;
            promoted.protocol = old.protocol;
            promoted.children = std::move(child.children);
            promoted.detached = std::move(child.detached);
            reparent(old.children, promoted.children, carried);
            demoted.children = std::move(old.children);
            promoted.children.push_back(std::move(demoted));
            t = std::move(promoted);
            rule = "Node-Forward";
        } else if (parent_sends) {
            k.protocol = next_protocol;
            k.term = plug(theirs.context, mk::ret(pair));
            std::vector<SpawnTree> moved;
            reparent(t.children, moved, carried);
            // `k` may have shifted; look it up again by its end
            auto it = std::find_if(t.children.begin(), t.children.end(),
                                   [&](const SpawnTree& c) { return c.parent_end == c_k; });
            for (SpawnTree& m : moved) it->children.push_back(std::move(m));
            t.term = plug(mine.context, mk::ret(mk::chan(c_k)));
            rule = prefix + (ghost ? "SendGhost" : "Send");
        } else {
            k.protocol = next_protocol;
            k.term = plug(theirs.context, mk::ret(mk::chan(d_k)));
            std::vector<SpawnTree> moved;
            reparent(k.children, moved, carried);
            for (SpawnTree& m : moved) t.children.push_back(std::move(m));
            t.term = plug(mine.context, mk::ret(pair));
            rule = prefix + (ghost ? "RecvGhost" : "Recv");
        }

        TreeStep s = stepped(rule, ghost ? RuleKind::ComGhost : RuleKind::Com);
        s.info.chans = chans;
        s.info.payload = v;
        s.info.payload_kind = ghost ? PayloadKind::Ghost : PayloadKind::Real;
        if (!ghost) s.info.payload_text = pretty(v);
        return s;
    }

    ChannelId& next_;
    std::mt19937_64& rng_;
    std::size_t fuel_;
};

ChannelId max_channel(const SpawnTree& t) {
    ChannelId m = 0;
    for (ChannelId c : free_channels(t.term)) m = std::max(m, c + 1);
    for (const SpawnTree& c : t.children) m = std::max({m, max_channel(c), c.parent_end + 1, c.own_end + 1});
    for (const SpawnTree& q : t.detached) m = std::max(m, max_channel(q));
    return m;
}

}  // namespace

Configuration flatten(const SpawnTree& t, ChannelId next_channel) {
    Configuration out;
    flatten_into(t, out);
    out.next_channel = std::max(next_channel, max_channel(t));
    normalize(out);
    return out;
}

void validate(const SpawnTree& t, std::size_t fuel) {
    if (!t.root) fail(ErrorCode::InternalInvariantViolation, "validation starts at a root");
    std::set<ChannelId> seen;
    validate_at(t, "root", fuel, seen);
}

bool is_terminal(const SpawnTree& t) {
    return t.root && t.children.empty() && finished(t.term) &&
           std::all_of(t.detached.begin(), t.detached.end(), [](const SpawnTree& q) { return is_terminal(q); });
}

TreeStep tree_step(SpawnTree& t, ChannelId& next_channel, std::mt19937_64& rng, std::size_t fuel) {
    Scheduler s(next_channel, rng, fuel);
    return s.step(t);
}

TreeRunResult tree_run(const Term& main, const TreeRunOptions& opts) {
    TreeRunResult res;
    SpawnTree t = root_tree(main);
    ChannelId next = max_channel(t);
    std::mt19937_64 rng(opts.seed);
    if (opts.check) validate(t, opts.fuel);
    Configuration before = flatten(t, next);
    if (opts.observe) opts.observe(before);
    for (;;) {
        if (is_terminal(t)) {
            res.outcome = Outcome::Done;
            break;
        }
        if (res.steps.size() >= opts.max_steps) {
            res.outcome = Outcome::Budget;
            break;
        }
        TreeStep s = tree_step(t, next, rng, opts.fuel);
        if (s.status != TreeStatus::Stepped)
            fail(ErrorCode::ProgressViolation, "the root neither steps nor terminates");
        Configuration after = flatten(t, next);
        if (opts.check) {
            try {
                validate(t, opts.fuel);
            } catch (const KernelError& e) {
                fail(ErrorCode::FidelityViolation,
                     "tree invalid after step " + std::to_string(res.steps.size() + 1) + ": " + e.what());
            }
            bool related = false;
            for (const Redex& r : enabled_redexes(before)) {
                if (r.rule != s.info.rule) continue;
                if (congruent(apply_redex(before, r, opts.fuel), after)) {
                    related = true;
                    break;
                }
            }
            if (!related)
                fail(ErrorCode::SimulationGap, "tree step " + std::to_string(res.steps.size() + 1) + " (" +
                                                   s.tree_rule + ") has no matching process step");
        }
        if (opts.observe) opts.observe(after);
        before = std::move(after);
        res.steps.push_back(std::move(s));
    }
    res.final_tree = std::move(t);
    return res;
}

std::string format_tree_trace(const TreeRunResult& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.steps.size(); ++i)
        out << format_step(i + 1, r.steps[i].info) << " tree-rule=" << r.steps[i].tree_rule << "\n";
    out << "result=" << to_string(r.outcome) << " steps=" << r.steps.size() << "\n";
    return out.str();
}

bool certify_reachable(const Configuration& c, const Term& main, std::size_t max_steps, std::uint64_t seed,
                       std::size_t fuel) {
    bool found = false;
    TreeRunOptions opts;
    opts.seed = seed;
    opts.max_steps = max_steps;
    opts.fuel = fuel;
    opts.check = false;
    opts.observe = [&](const Configuration& flat) { found = found || congruent(c, flat); };
    tree_run(main, opts);
    return found;
}

}  // namespace tllc
