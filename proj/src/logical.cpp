#include "tllc/logical.hpp"

#include <set>

#include "tllc/error.hpp"
#include "tllc/print.hpp"

namespace tllc {

std::vector<std::string> TypingContext::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const Binding& b : entries_) out.push_back(b.name);
    return out;
}

Term LogicalChecker::whnf(const Term& t) const {
    Fuel f(fuel_);
    return tllc::whnf(t, f);
}

bool LogicalChecker::convertible(const Term& a, const Term& b) const {
    Fuel f(fuel_);
    return tllc::convertible(a, b, f);
}

void LogicalChecker::mismatch(const TypingContext& ctx, const Term& expected, const Term& found,
                              const Node* at) const {
    auto names = ctx.names();
    fail(ErrorCode::TypeMismatch, "expected " + pretty(expected, names) + ", found " + pretty(found, names), at);
}

Sorted LogicalChecker::sort_of(TypingContext& ctx, const Term& a) {
    Typed t = infer(ctx, a);
    Term s = whnf(t.type);
    if (s.kind() != Kind::SortT)
        fail(ErrorCode::NotASort, pretty(a, ctx.names()) + " is not a type (its type is " +
                                      pretty(t.type, ctx.names()) + ")",
             a.get());
    return {s.sort(), t.term};
}

Term LogicalChecker::session_op_type(Kind op, const Term& chan_type, const Node* at) const {
    Term ct = whnf(chan_type);
    if (ct.kind() != Kind::ChT && ct.kind() != Kind::HcT)
        fail(ErrorCode::NotAChannel, "expected a channel, found " + pretty(chan_type), at);
    const bool ch = ct.kind() == Kind::ChT;
    Term p = whnf(ct.kid(0));
    auto wrap = [ch](const Term& b) { return ch ? mk::ch(b) : mk::hc(b); };
    auto wrong = [&](const char* what) -> Term {
        fail(ErrorCode::TypeMismatch,
             std::string(what) + " is not allowed on " + (ch ? "ch<" : "hc<") + pretty(ct.kid(0)) + ">", at);
    };
    // ch reads ! as send and ? as receive; hc reads them the other way round.
    const Polarity out = ch ? Polarity::Send : Polarity::Recv;
    const Polarity in = ch ? Polarity::Recv : Polarity::Send;
    switch (op) {
    case Kind::SendOp:
        if (p.kind() != Kind::ActExp || p.polarity() != out) return wrong("send");
        return mk::pi_exp(Sort::L, p.name(), p.kid(0), mk::c_type(wrap(p.kid(1))));
    case Kind::SendGhostOp:
        if (p.kind() != Kind::ActImp || p.polarity() != out) return wrong("send~");
        return mk::pi_imp(Sort::L, p.name(), p.kid(0), mk::c_type(wrap(p.kid(1))));
    case Kind::RecvOp:
        if (p.kind() != Kind::ActExp || p.polarity() != in) return wrong("recv");
        return mk::c_type(mk::sig_exp(Sort::L, p.name(), p.kid(0), wrap(p.kid(1))));
    case Kind::RecvGhostOp:
        if (p.kind() != Kind::ActImp || p.polarity() != in) return wrong("recv~");
        return mk::c_type(mk::sig_imp(Sort::L, p.name(), p.kid(0), wrap(p.kid(1))));
    case Kind::CloseOp:
        if (!ch || p.kind() != Kind::End) return wrong("close");
        return mk::c_type(mk::unit());
    case Kind::WaitOp:
        if (ch || p.kind() != Kind::End) return wrong("wait");
        return mk::c_type(mk::unit());
    default:
        fail(ErrorCode::InternalInvariantViolation, "not a session operator", at);
    }
}

Term LogicalChecker::fork_protocol(TypingContext& ctx, const Term& ann, const Node* at) {
    if (ann.kind() != Kind::ChT)
        fail(ErrorCode::TypeMismatch, "fork annotation must be ch<A>, found " + pretty(ann, ctx.names()), at);
    return check(ctx, ann.kid(0), mk::proto()).term;
}

Typed LogicalChecker::infer_pair(TypingContext& ctx, const Term& m) {
    if (m.pair_type()) {
        Term sig = m.pair_type();
        sort_of(ctx, sig);
        return check_pair(ctx, m, sig);
    }
    const bool exp = m.kind() == Kind::PairExp;
    Typed a = infer(ctx, m.kid(0));
    Typed b = infer(ctx, m.kid(1));
    Term sig = exp ? mk::sig_exp(m.sort(), "_", a.type, shift(b.type, 1))
                   : mk::sig_imp(m.sort(), "_", a.type, shift(b.type, 1));
    sort_of(ctx, sig);
    return {sig, with_kids(m, {a.term, b.term}, sig)};
}

Typed LogicalChecker::check_pair(TypingContext& ctx, const Term& m, const Term& expected) {
    Term sig = whnf(expected);
    Kind want = m.kind() == Kind::PairExp ? Kind::SigExp : Kind::SigImp;
    if (sig.kind() != want || sig.sort() != m.sort()) mismatch(ctx, expected, mk::sig_exp(m.sort(), "_", mk::hole(), mk::hole()), m.get());
    Typed a = check(ctx, m.kid(0), sig.kid(0));
    Typed b = check(ctx, m.kid(1), instantiate(sig.kid(1), a.term));
    return {expected, with_kids(m, {a.term, b.term}, sig)};
}

Typed LogicalChecker::infer(TypingContext& ctx, const Term& m) {
    switch (m.kind()) {
    case Kind::Var:
        if (!ctx.contains_index(m.index())) fail(ErrorCode::UnboundVariable, "unbound variable " + m.name(), m.get());
        return {ctx.type_of(m.index()), m};
    case Kind::SortT:
    case Kind::Unit:
    case Kind::Bool:
    case Kind::Proto:
        return {mk::sort(Sort::U), m};
    case Kind::UnitVal:
        return {mk::unit(), m};
    case Kind::TrueV:
    case Kind::FalseV:
        return {mk::bool_t(), m};
    case Kind::End:
        return {mk::proto(), m};
    case Kind::PiExp:
    case Kind::PiImp:
    case Kind::SigExp:
    case Kind::SigImp: {
        Sorted a = sort_of(ctx, m.kid(0));
        Sorted b;
        {
            ScopedBinding x(ctx, {m.name(), a.term});
            b = sort_of(ctx, m.kid(1));
        }
        const Sort t = m.sort();
        if (m.kind() == Kind::SigExp && !(sort_leq(a.sort, t) && sort_leq(b.sort, t)))
            fail(ErrorCode::SigSortViolation,
                 std::string("sig^") + to_string(t) + " cannot hold components of sorts " + to_string(a.sort) +
                     " and " + to_string(b.sort),
                 m.get());
        if (m.kind() == Kind::SigImp && !sort_leq(b.sort, t))
            fail(ErrorCode::SigSortViolation,
                 std::string("sig^") + to_string(t) + " cannot hold a second component of sort " + to_string(b.sort),
                 m.get());
        return {mk::sort(t), with_kids(m, {a.term, b.term})};
    }
    case Kind::LamExp:
    case Kind::LamImp: {
        Sorted a = sort_of(ctx, m.kid(0));
        Typed body;
        {
            ScopedBinding x(ctx, {m.name(), a.term});
            body = infer(ctx, m.kid(1));
        }
        Term ty = m.kind() == Kind::LamExp ? mk::pi_exp(m.sort(), m.name(), a.term, body.type)
                                           : mk::pi_imp(m.sort(), m.name(), a.term, body.type);
        return {ty, with_kids(m, {a.term, body.term})};
    }
    case Kind::AppExp:
    case Kind::AppImp: {
        Typed f = infer(ctx, m.kid(0));
        Term pi = whnf(f.type);
        Kind want = m.kind() == Kind::AppExp ? Kind::PiExp : Kind::PiImp;
        if (pi.kind() != want)
            fail(ErrorCode::NotAFunction,
                 pretty(m.kid(0), ctx.names()) + " has type " + pretty(f.type, ctx.names()) +
                     (want == Kind::PiExp ? ", not an explicit function type" : ", not an implicit function type"),
                 m.get());
        Typed a = check(ctx, m.kid(1), pi.kid(0));
        return {instantiate(pi.kid(1), a.term), with_kids(m, {f.term, a.term})};
    }
    case Kind::PairExp:
    case Kind::PairImp:
        return infer_pair(ctx, m);
    case Kind::SigElim: {
        Typed s = infer(ctx, m.kid(1));
        Term sig = whnf(s.type);
        if (sig.kind() != Kind::SigExp && sig.kind() != Kind::SigImp)
            fail(ErrorCode::NotAPair, "cannot eliminate " + pretty(s.type, ctx.names()) + " as a pair", m.get());
        Sorted motive;
        {
            ScopedBinding z(ctx, {m.name(0), sig});
            motive = sort_of(ctx, m.kid(0));
        }
        Typed branch;
        {
            ScopedBinding x(ctx, {m.name(1), sig.kid(0)});
            ScopedBinding y(ctx, {m.name(2), sig.kid(1)});
            branch = check(ctx, m.kid(2), pair_motive(motive.term, sig));
        }
        return {instantiate(motive.term, s.term), with_kids(m, {motive.term, s.term, branch.term})};
    }
    case Kind::BoolElim: {
        Typed s = infer(ctx, m.kid(1));
        if (whnf(s.type).kind() != Kind::Bool)
            fail(ErrorCode::NotABool, "cannot branch on " + pretty(s.type, ctx.names()), m.get());
        Sorted motive;
        {
            ScopedBinding z(ctx, {m.name(0), mk::bool_t()});
            motive = sort_of(ctx, m.kid(0));
        }
        Typed t = check(ctx, m.kid(2), instantiate(motive.term, mk::true_v()));
        Typed f = check(ctx, m.kid(3), instantiate(motive.term, mk::false_v()));
        return {instantiate(motive.term, s.term), with_kids(m, {motive.term, s.term, t.term, f.term})};
    }
    case Kind::CType: {
        Sorted a = sort_of(ctx, m.kid(0));
        return {mk::sort(Sort::L), with_kids(m, {a.term})};
    }
    case Kind::Return: {
        Typed a = infer(ctx, m.kid(0));
        return {mk::c_type(a.type), with_kids(m, {a.term})};
    }
    case Kind::Bind: {
        Typed a = infer(ctx, m.kid(0));
        Term ca = whnf(a.type);
        if (ca.kind() != Kind::CType)
            fail(ErrorCode::NotAMonad, "let-bound term has type " + pretty(a.type, ctx.names()), m.get());
        Typed n;
        {
            ScopedBinding x(ctx, {m.name(), ca.kid(0)});
            n = infer(ctx, m.kid(1));
        }
        Term cb = whnf(n.type);
        if (cb.kind() != Kind::CType)
            fail(ErrorCode::NotAMonad, "let body has type " + pretty(n.type, [&] {
                     auto v = ctx.names();
                     v.push_back(m.name());
                     return v;
                 }()),
                 m.get());
        if (occurs_free(cb.kid(0), 0))
            fail(ErrorCode::DependentBind, "the result type of let depends on '" + m.name() + "'", m.get());
        Term b = shift(cb.kid(0), -1);
        sort_of(ctx, b);
        return {mk::c_type(b), with_kids(m, {a.term, n.term})};
    }
    case Kind::ActExp:
    case Kind::ActImp: {
        Sorted a = sort_of(ctx, m.kid(0));
        Typed b;
        {
            ScopedBinding x(ctx, {m.name(), a.term});
            b = check(ctx, m.kid(1), mk::proto());
        }
        return {mk::proto(), with_kids(m, {a.term, b.term})};
    }
    case Kind::Fix: {
        Sorted a = sort_of(ctx, m.kid(0));
        if (!is_arity(a.term, mk::proto()))
            fail(ErrorCode::ArityViolation, pretty(m.kid(0), ctx.names()) + " is not an arity ending on proto",
                 m.get());
        if (!is_guarded(m.kid(1), 0))
            fail(ErrorCode::GuardViolation, "'" + m.name() + "' is not guarded by a protocol action", m.get());
        Typed body;
        {
            ScopedBinding x(ctx, {m.name(), a.term});
            body = check(ctx, m.kid(1), shift(a.term, 1));
        }
        return {a.term, with_kids(m, {a.term, body.term})};
    }
    case Kind::ChT:
    case Kind::HcT: {
        Typed a = check(ctx, m.kid(0), mk::proto());
        return {mk::sort(Sort::L), with_kids(m, {a.term})};
    }
    case Kind::ChanLit: {
        if (channels_) {
            auto it = channels_->find(m.channel());
            if (it != channels_->end()) return {it->second, m};
        }
        fail(ErrorCode::UnboundChannel, "unknown channel #" + std::to_string(m.channel()), m.get());
    }
    case Kind::Fork: {
        Term a = fork_protocol(ctx, m.kid(0), m.get());
        Typed body;
        {
            ScopedBinding x(ctx, {m.name(), mk::ch(a)});
            body = check(ctx, m.kid(1), mk::c_type(mk::unit()));
        }
        return {mk::c_type(mk::hc(a)), with_kids(m, {mk::ch(a), body.term})};
    }
    case Kind::SendOp:
    case Kind::SendGhostOp:
    case Kind::RecvOp:
    case Kind::RecvGhostOp:
    case Kind::CloseOp:
    case Kind::WaitOp: {
        Typed c = infer(ctx, m.kid(0));
        return {session_op_type(m.kind(), c.type, m.get()), with_kids(m, {c.term})};
    }
    case Kind::Hole:
        fail(ErrorCode::HoleInspected, "an erased term cannot be typed", m.get());
    }
    fail(ErrorCode::InternalInvariantViolation, "unknown term", m.get());
}

Typed LogicalChecker::check(TypingContext& ctx, const Term& m, const Term& expected) {
    switch (m.kind()) {
    case Kind::PairExp:
    case Kind::PairImp: {
        Term sig = whnf(expected);
        Kind want = m.kind() == Kind::PairExp ? Kind::SigExp : Kind::SigImp;
        if (sig.kind() == want && sig.sort() == m.sort()) return check_pair(ctx, m, expected);
        break;
    }
    case Kind::LamExp:
    case Kind::LamImp: {
        Term pi = whnf(expected);
        Kind want = m.kind() == Kind::LamExp ? Kind::PiExp : Kind::PiImp;
        if (pi.kind() != want || pi.sort() != m.sort()) break;
        Sorted a = sort_of(ctx, m.kid(0));
        if (!convertible(a.term, pi.kid(0))) mismatch(ctx, pi.kid(0), a.term, m.kid(0).get());
        Typed body;
        {
            ScopedBinding x(ctx, {m.name(), a.term});
            body = check(ctx, m.kid(1), pi.kid(1));
        }
        return {expected, with_kids(m, {a.term, body.term})};
    }
    case Kind::Return: {
        Term c = whnf(expected);
        if (c.kind() != Kind::CType) break;
        Typed a = check(ctx, m.kid(0), c.kid(0));
        return {expected, with_kids(m, {a.term})};
    }
    case Kind::Bind: {
        Term c = whnf(expected);
        if (c.kind() != Kind::CType) break;
        Typed a = infer(ctx, m.kid(0));
        Term ca = whnf(a.type);
        if (ca.kind() != Kind::CType)
            fail(ErrorCode::NotAMonad, "let-bound term has type " + pretty(a.type, ctx.names()), m.get());
        Typed n;
        {
            ScopedBinding x(ctx, {m.name(), ca.kid(0)});
            n = check(ctx, m.kid(1), shift(expected, 1));
        }
        return {expected, with_kids(m, {a.term, n.term})};
    }
    default:
        break;
    }
    Typed r = infer(ctx, m);
    if (!convertible(r.type, expected)) mismatch(ctx, expected, r.type, m.get());
    return {expected, r.term};
}

Term pair_motive(const Term& motive, const Term& sig) {
    Term pair = sig.kind() == Kind::SigExp ? mk::pair_exp(mk::var(1, "x"), mk::var(0, "y"), sig.sort())
                                           : mk::pair_imp(mk::var(1, "x"), mk::var(0, "y"), sig.sort());
    pair = with_pair_type(pair, shift(sig, 2));
    return instantiate(shift(motive, 2, 1), pair);
}

TypingContext logical_scope(const LogicalContext& gamma) {
    TypingContext ctx;
    for (const LogicalEntry& e : gamma) ctx.push({e.name, e.type});
    return ctx;
}

Term infer_logical(const LogicalContext& gamma, const Term& m, std::size_t fuel) {
    return elaborate_logical(gamma, m, fuel).type;
}

Typed elaborate_logical(const LogicalContext& gamma, const Term& m, std::size_t fuel) {
    TypingContext ctx = logical_scope(gamma);
    LogicalChecker checker(fuel);
    return checker.infer(ctx, m);
}

Sort sort_of(const LogicalContext& gamma, const Term& a, std::size_t fuel) {
    TypingContext ctx = logical_scope(gamma);
    LogicalChecker checker(fuel);
    return checker.sort_of(ctx, a).sort;
}

void check_logical_context(const LogicalContext& gamma, std::size_t fuel) {
    TypingContext ctx;
    LogicalChecker checker(fuel);
    std::set<std::string> seen;
    for (const LogicalEntry& e : gamma) {
        if (!seen.insert(e.name).second) fail(ErrorCode::DuplicateName, "'" + e.name + "' is bound twice");
        checker.sort_of(ctx, e.type);
        ctx.push({e.name, e.type});
    }
}

}  // namespace tllc
