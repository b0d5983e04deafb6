#include "tllc/program.hpp"

#include <algorithm>

#include "tllc/error.hpp"
#include "tllc/print.hpp"
#include "tllc/values.hpp"

namespace tllc {

Usage ProgramChecker::join(Usage a, const Usage& b, const TypingContext& ctx, const Node* at) const {
    for (std::size_t l : b.linear)
        if (!a.linear.insert(l).second)
            fail(ErrorCode::LinearReused, "linear variable '" + ctx.at_level(l).name + "' is used more than once", at);
    for (ChannelId c : b.channels)
        if (!a.channels.insert(c).second)
            fail(ErrorCode::ChannelReused, "channel #" + std::to_string(c) + " is used more than once", at);
    a.unrestricted.insert(b.unrestricted.begin(), b.unrestricted.end());
    return a;
}

void ProgramChecker::close_binder(Usage& u, const TypingContext& ctx, const Node* at) const {
    const std::size_t level = ctx.size() - 1;
    const Binding& b = ctx.at_level(level);
    if (b.relevant && b.sort == Sort::L && !u.linear.count(level))
        fail(ErrorCode::LinearUnused, "linear variable '" + b.name + "' is never used", at);
    u.linear.erase(level);
    u.unrestricted.erase(level);
}

Checked ProgramChecker::lambda(TypingContext& ctx, const Term& m, const Term* codomain) {
    Sorted a = logic_.sort_of(ctx, m.kid(0));
    const bool explicit_lam = m.kind() == Kind::LamExp;
    Checked body;
    {
        ScopedBinding x(ctx, {m.name(), a.term, explicit_lam, a.sort});
        body = codomain ? check(ctx, m.kid(1), *codomain) : synth(ctx, m.kid(1));
        close_binder(body.usage, ctx, m.get());
    }
    if (m.sort() == Sort::U && (!body.usage.linear.empty() || !body.usage.channels.empty())) {
        std::string what = !body.usage.linear.empty()
                               ? "linear variable '" + ctx.at_level(*body.usage.linear.begin()).name + "'"
                               : "channel #" + std::to_string(*body.usage.channels.begin());
        fail(ErrorCode::CaptureViolation, "unrestricted function captures " + what, m.get());
    }
    Term ty = explicit_lam ? mk::pi_exp(m.sort(), m.name(), a.term, body.type)
                           : mk::pi_imp(m.sort(), m.name(), a.term, body.type);
    return {ty, with_kids(m, {a.term, body.term}), std::move(body.usage)};
}

Checked ProgramChecker::pair_against(TypingContext& ctx, const Term& m, const Term& expected) {
    Term sig = logic_.whnf(expected);
    if (m.kind() == Kind::PairExp) {
        Checked a = check(ctx, m.kid(0), sig.kid(0));
        Checked b = check(ctx, m.kid(1), instantiate(sig.kid(1), a.term));
        return {expected, with_kids(m, {a.term, b.term}, sig), join(std::move(a.usage), b.usage, ctx, m.get())};
    }
    Typed a = logic_.check(ctx, m.kid(0), sig.kid(0));
    Checked b = check(ctx, m.kid(1), instantiate(sig.kid(1), a.term));
    return {expected, with_kids(m, {a.term, b.term}, sig), std::move(b.usage)};
}

Checked ProgramChecker::bind(TypingContext& ctx, const Term& m, const Term* expected) {
    Checked a = synth(ctx, m.kid(0));
    Term ca = logic_.whnf(a.type);
    if (ca.kind() != Kind::CType)
        fail(ErrorCode::NotAMonad, "let-bound term has type " + pretty(a.type, ctx.names()), m.get());
    Sort r = logic_.sort_of(ctx, ca.kid(0)).sort;
    Checked n;
    Term result;
    {
        ScopedBinding x(ctx, {m.name(), ca.kid(0), true, r});
        if (expected) {
            n = check(ctx, m.kid(1), shift(*expected, 1));
            result = *expected;
        } else {
            n = synth(ctx, m.kid(1));
            Term cb = logic_.whnf(n.type);
            if (cb.kind() != Kind::CType)
                fail(ErrorCode::NotAMonad, "let body has type " + pretty(n.type, ctx.names()), m.get());
            if (occurs_free(cb.kid(0), 0))
                fail(ErrorCode::DependentBind,
                     "the result type " + pretty(cb.kid(0), ctx.names()) + " depends on '" + m.name() + "'", m.get());
            result = mk::c_type(shift(cb.kid(0), -1));
        }
        close_binder(n.usage, ctx, m.get());
    }
    if (!expected) logic_.sort_of(ctx, result.kid(0));
    return {result, with_kids(m, {a.term, n.term}), join(std::move(a.usage), n.usage, ctx, m.get())};
}

Checked ProgramChecker::synth(TypingContext& ctx, const Term& m) {
    switch (m.kind()) {
    case Kind::Var: {
        if (!ctx.contains_index(m.index())) fail(ErrorCode::UnboundVariable, "unbound variable " + m.name(), m.get());
        const Binding& b = ctx.at_index(m.index());
        if (!b.relevant)
            fail(ErrorCode::GhostUsage, "ghost variable '" + b.name + "' cannot be used at runtime", m.get());
        Usage u;
        (b.sort == Sort::L ? u.linear : u.unrestricted).insert(ctx.level_of(m.index()));
        return {ctx.type_of(m.index()), m, std::move(u)};
    }
    case Kind::LamExp:
    case Kind::LamImp:
        return lambda(ctx, m, nullptr);
    case Kind::AppExp: {
        Checked f = synth(ctx, m.kid(0));
        Term pi = logic_.whnf(f.type);
        if (pi.kind() != Kind::PiExp)
            fail(ErrorCode::NotAFunction,
                 pretty(m.kid(0), ctx.names()) + " has type " + pretty(f.type, ctx.names()) +
                     ", not an explicit function type",
                 m.get());
        Checked a = check(ctx, m.kid(1), pi.kid(0));
        return {instantiate(pi.kid(1), a.term), with_kids(m, {f.term, a.term}),
                join(std::move(f.usage), a.usage, ctx, m.get())};
    }
    case Kind::AppImp: {
        Checked f = synth(ctx, m.kid(0));
        Term pi = logic_.whnf(f.type);
        if (pi.kind() != Kind::PiImp)
            fail(ErrorCode::NotAFunction,
                 pretty(m.kid(0), ctx.names()) + " has type " + pretty(f.type, ctx.names()) +
                     ", not an implicit function type",
                 m.get());
        Typed a = logic_.check(ctx, m.kid(1), pi.kid(0));
        return {instantiate(pi.kid(1), a.term), with_kids(m, {f.term, a.term}), std::move(f.usage)};
    }
    case Kind::PairExp:
    case Kind::PairImp: {
        if (m.pair_type()) {
            Term sig = logic_.whnf(m.pair_type());
            Kind want = m.kind() == Kind::PairExp ? Kind::SigExp : Kind::SigImp;
            if (sig.kind() != want || sig.sort() != m.sort())
                fail(ErrorCode::InternalInvariantViolation, "pair annotated with a non-matching type", m.get());
            logic_.sort_of(ctx, m.pair_type());
            return pair_against(ctx, m, m.pair_type());
        }
        const bool exp = m.kind() == Kind::PairExp;
        Checked a;
        if (exp) {
            a = synth(ctx, m.kid(0));
        } else {
            Typed g = logic_.infer(ctx, m.kid(0));
            a = {g.type, g.term, {}};
        }
        Checked b = synth(ctx, m.kid(1));
        Term sig = exp ? mk::sig_exp(m.sort(), "_", a.type, shift(b.type, 1))
                       : mk::sig_imp(m.sort(), "_", a.type, shift(b.type, 1));
        logic_.sort_of(ctx, sig);
        return {sig, with_kids(m, {a.term, b.term}, sig), join(std::move(a.usage), b.usage, ctx, m.get())};
    }
    case Kind::SigElim: {
        Checked s = synth(ctx, m.kid(1));
        Term sig = logic_.whnf(s.type);
        if (sig.kind() != Kind::SigExp && sig.kind() != Kind::SigImp)
            fail(ErrorCode::NotAPair, "cannot eliminate " + pretty(s.type, ctx.names()) + " as a pair", m.get());
        Sorted motive;
        {
            ScopedBinding z(ctx, {m.name(0), sig});
            motive = logic_.sort_of(ctx, m.kid(0));
        }
        const bool exp = sig.kind() == Kind::SigExp;
        Checked n;
        {
            Sort r1 = logic_.sort_of(ctx, sig.kid(0)).sort;
            ScopedBinding x(ctx, {m.name(1), sig.kid(0), exp, r1});
            Sort r2 = logic_.sort_of(ctx, sig.kid(1)).sort;
            {
                ScopedBinding y(ctx, {m.name(2), sig.kid(1), true, r2});
                n = check(ctx, m.kid(2), pair_motive(motive.term, sig));
                close_binder(n.usage, ctx, m.get());
            }
            close_binder(n.usage, ctx, m.get());
        }
        return {instantiate(motive.term, s.term), with_kids(m, {motive.term, s.term, n.term}),
                join(std::move(s.usage), n.usage, ctx, m.get())};
    }
    case Kind::UnitVal:
        return {mk::unit(), m, {}};
    case Kind::TrueV:
    case Kind::FalseV:
        return {mk::bool_t(), m, {}};
    case Kind::BoolElim: {
        Checked s = synth(ctx, m.kid(1));
        if (logic_.whnf(s.type).kind() != Kind::Bool)
            fail(ErrorCode::NotABool, "cannot branch on " + pretty(s.type, ctx.names()), m.get());
        Sorted motive;
        {
            ScopedBinding z(ctx, {m.name(0), mk::bool_t()});
            motive = logic_.sort_of(ctx, m.kid(0));
        }
        Checked t = check(ctx, m.kid(2), instantiate(motive.term, mk::true_v()));
        Checked f = check(ctx, m.kid(3), instantiate(motive.term, mk::false_v()));
        if (t.usage.linear != f.usage.linear) {
            std::set<std::size_t> diff;
            std::set_symmetric_difference(t.usage.linear.begin(), t.usage.linear.end(), f.usage.linear.begin(),
                                          f.usage.linear.end(), std::inserter(diff, diff.begin()));
            fail(ErrorCode::LinearUnused,
                 "linear variable '" + ctx.at_level(*diff.begin()).name + "' is used in only one branch", m.get());
        }
        if (t.usage.channels != f.usage.channels) {
            std::set<ChannelId> diff;
            std::set_symmetric_difference(t.usage.channels.begin(), t.usage.channels.end(),
                                          f.usage.channels.begin(), f.usage.channels.end(),
                                          std::inserter(diff, diff.begin()));
            fail(ErrorCode::ChannelUnused, "channel #" + std::to_string(*diff.begin()) + " is used in only one branch",
                 m.get());
        }
        Usage branches = t.usage;
        branches.unrestricted.insert(f.usage.unrestricted.begin(), f.usage.unrestricted.end());
        return {instantiate(motive.term, s.term), with_kids(m, {motive.term, s.term, t.term, f.term}),
                join(std::move(s.usage), branches, ctx, m.get())};
    }
    case Kind::Return: {
        Checked a = synth(ctx, m.kid(0));
        return {mk::c_type(a.type), with_kids(m, {a.term}), std::move(a.usage)};
    }
    case Kind::Bind:
        return bind(ctx, m, nullptr);
    case Kind::ChanLit: {
        auto it = theta_.find(m.channel());
        if (it == theta_.end())
            fail(ErrorCode::UnboundChannel, "channel #" + std::to_string(m.channel()) + " is not in scope", m.get());
        Usage u;
        u.channels.insert(m.channel());
        return {it->second, m, std::move(u)};
    }
    case Kind::Fork: {
        Term a = logic_.fork_protocol(ctx, m.kid(0), m.get());
        Checked body;
        {
            ScopedBinding x(ctx, {m.name(), mk::ch(a), true, Sort::L});
            body = check(ctx, m.kid(1), mk::c_type(mk::unit()));
            close_binder(body.usage, ctx, m.get());
        }
        return {mk::c_type(mk::hc(a)), with_kids(m, {mk::ch(a), body.term}), std::move(body.usage)};
    }
    case Kind::SendOp:
    case Kind::SendGhostOp:
    case Kind::RecvOp:
    case Kind::RecvGhostOp:
    case Kind::CloseOp:
    case Kind::WaitOp: {
        Checked c = synth(ctx, m.kid(0));
        return {logic_.session_op_type(m.kind(), c.type, m.get()), with_kids(m, {c.term}), std::move(c.usage)};
    }
    case Kind::Hole:
        fail(ErrorCode::HoleInspected, "an erased term cannot be typed", m.get());
    default:
        break;
    }
    fail(ErrorCode::GhostUsage, pretty(m, ctx.names()) + " is a type and has no runtime meaning", m.get());
}

Checked ProgramChecker::check(TypingContext& ctx, const Term& m, const Term& expected) {
    switch (m.kind()) {
    case Kind::PairExp:
    case Kind::PairImp: {
        Term sig = logic_.whnf(expected);
        Kind want = m.kind() == Kind::PairExp ? Kind::SigExp : Kind::SigImp;
        if (sig.kind() == want && sig.sort() == m.sort()) return pair_against(ctx, m, expected);
        break;
    }
    case Kind::LamExp:
    case Kind::LamImp: {
        Term pi = logic_.whnf(expected);
        Kind want = m.kind() == Kind::LamExp ? Kind::PiExp : Kind::PiImp;
        if (pi.kind() != want || pi.sort() != m.sort()) break;
        Sorted a = logic_.sort_of(ctx, m.kid(0));
        if (!logic_.convertible(a.term, pi.kid(0))) logic_.mismatch(ctx, pi.kid(0), a.term, m.kid(0).get());
        Checked r = lambda(ctx, m, &pi.kid(1));
        r.type = expected;
        return r;
    }
    case Kind::Return: {
        Term c = logic_.whnf(expected);
        if (c.kind() != Kind::CType) break;
        Checked a = check(ctx, m.kid(0), c.kid(0));
        return {expected, with_kids(m, {a.term}), std::move(a.usage)};
    }
    case Kind::Bind: {
        if (logic_.whnf(expected).kind() != Kind::CType) break;
        return bind(ctx, m, &expected);
    }
    default:
        break;
    }
    Checked r = synth(ctx, m);
    if (!logic_.convertible(r.type, expected)) logic_.mismatch(ctx, expected, r.type, m.get());
    r.type = expected;
    return r;
}

ChannelTypes channel_types(const ChannelContext& theta) {
    ChannelTypes out;
    for (const ChannelEntry& e : theta) out[e.channel] = e.type;
    return out;
}

namespace {

struct Prepared {
    TypingContext ctx;
    ChannelTypes channels;
    std::vector<std::size_t> linear_levels;
};

Prepared prepare(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta,
                 std::size_t fuel) {
    Prepared p;
    LogicalChecker logic(fuel);
    for (const ChannelEntry& e : theta) {
        if ((e.type.kind() != Kind::ChT && e.type.kind() != Kind::HcT) || !is_closed(e.type))
            fail(ErrorCode::NotAChannel, "channel #" + std::to_string(e.channel) + " needs a closed ch/hc type");
        TypingContext empty;
        logic.check(empty, e.type.kid(0), mk::proto());
        if (!p.channels.emplace(e.channel, e.type).second)
            fail(ErrorCode::DuplicateName, "channel #" + std::to_string(e.channel) + " is bound twice");
    }
    check_logical_context(gamma, fuel);
    for (const ProgramEntry& d : delta)
        if (std::none_of(gamma.begin(), gamma.end(), [&](const LogicalEntry& g) { return g.name == d.name; }))
            fail(ErrorCode::UnboundVariable, "'" + d.name + "' is in the program context but not the logical one");
    for (const LogicalEntry& g : gamma) {
        auto it = std::find_if(delta.begin(), delta.end(), [&](const ProgramEntry& d) { return d.name == g.name; });
        Binding b{g.name, g.type, it != delta.end(), Sort::U};
        if (b.relevant) {
            Sort s = logic.sort_of(p.ctx, g.type).sort;
            if (s != it->sort)
                fail(ErrorCode::TypeMismatch, "'" + g.name + "' is annotated with the wrong sort");
            b.sort = s;
            if (s == Sort::L) p.linear_levels.push_back(p.ctx.size());
        }
        p.ctx.push(std::move(b));
    }
    return p;
}

ProgramResult finish(const Prepared& p, Checked c, const Term& m) {
    for (std::size_t l : p.linear_levels)
        if (!c.usage.linear.count(l))
            fail(ErrorCode::LinearUnused, "linear variable '" + p.ctx.at_level(l).name + "' is never used", m.get());
    for (const auto& [id, ty] : p.channels)
        if (!c.usage.channels.count(id))
            fail(ErrorCode::ChannelUnused, "channel #" + std::to_string(id) + " is never used", m.get());
    ProgramResult r{c.type, c.term, {}};
    for (std::size_t l : c.usage.linear) r.usage.used_linear.insert(p.ctx.at_level(l).name);
    for (std::size_t l : c.usage.unrestricted) r.usage.used_unrestricted.insert(p.ctx.at_level(l).name);
    r.usage.used_channels = c.usage.channels;
    return r;
}

}  // namespace

ProgramResult check_program(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta,
                            const Term& m, std::size_t fuel) {
    Prepared p = prepare(theta, gamma, delta, fuel);
    ProgramChecker checker(fuel, p.channels);
    Checked c = checker.synth(p.ctx, m);
    return finish(p, std::move(c), m);
}

ProgramResult check_program_against(const ChannelContext& theta, const LogicalContext& gamma,
                                    const ProgramContext& delta, const Term& m, const Term& expected,
                                    std::size_t fuel) {
    Prepared p = prepare(theta, gamma, delta, fuel);
    ProgramChecker checker(fuel, p.channels);
    Checked c = checker.check(p.ctx, m, expected);
    return finish(p, std::move(c), m);
}

Term check_closed_main(const Term& m, std::size_t fuel) {
    ProgramResult r = check_program({}, {}, {}, m, fuel);
    if (!convertible(r.type, mk::c_type(mk::unit()), fuel))
        fail(ErrorCode::NotMainType, "main must have type C(unit), found " + pretty(r.type), m.get());
    return r.term;
}

Term lift_to_logical(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta,
                     const Term& m, std::size_t fuel) {
    ProgramResult prog = check_program(theta, gamma, delta, m, fuel);
    ChannelTypes channels = channel_types(theta);
    TypingContext ctx = logical_scope(gamma);
    LogicalChecker logic(fuel, &channels);
    Typed t = logic.infer(ctx, m);
    if (!logic.convertible(t.type, prog.type)) {
        auto names = ctx.names();
        fail(ErrorCode::LiftingMismatch,
             "program type " + pretty(prog.type, names) + " differs from logical type " + pretty(t.type, names),
             m.get());
    }
    return t.type;
}

}  // namespace tllc
