#include "tllc/eval.hpp"

#include "tllc/error.hpp"
#include "tllc/print.hpp"
#include "tllc/values.hpp"

namespace tllc {

namespace detail {

namespace {

[[noreturn]] void inspected(const Term& m) {
    fail(ErrorCode::HoleInspected, "erased value inspected in " + pretty(m), m.get());
}

StepResult stepped(Term t) { return {StepKind::Stepped, std::move(t)}; }

}  // namespace

StepResult step(const Term& m, bool erased) {
    if (is_value(m)) return {StepKind::Value, m};
    const StepResult stuck{StepKind::Stuck, m};

    // Steps child i, rebuilding m around the result.
    auto congruence = [&](std::size_t i) -> StepResult {
        StepResult r = step(m.kid(i), erased);
        if (r.kind != StepKind::Stepped) return stuck;
        std::vector<Term> kids = m->kids;
        kids[i] = std::move(r.term);
        return stepped(with_kids(m, std::move(kids), m.pair_type()));
    };

    switch (m.kind()) {
    case Kind::AppExp: {
        const Term& f = m.kid(0);
        if (!is_value(f)) return congruence(0);
        if (!is_value(m.kid(1))) return congruence(1);
        if (f.kind() == Kind::LamExp) return stepped(instantiate(f.kid(1), m.kid(1)));
        if (erased && f.kind() == Kind::Hole) inspected(m);
        return stuck;
    }
    case Kind::AppImp: {
        const Term& f = m.kid(0);
        if (!is_value(f)) return congruence(0);
        if (f.kind() == Kind::LamImp) return stepped(instantiate(f.kid(1), m.kid(1)));
        if (erased && f.kind() == Kind::Hole) inspected(m);
        return stuck;
    }
    case Kind::PairExp:
        if (!is_value(m.kid(0))) return congruence(0);
        return congruence(1);
    case Kind::PairImp:
        return congruence(1);
    case Kind::SigElim: {
        const Term& s = m.kid(1);
        if (!is_value(s)) return congruence(1);
        if (s.kind() == Kind::PairExp || s.kind() == Kind::PairImp)
            return stepped(instantiate2(m.kid(2), s.kid(0), s.kid(1)));
        if (erased && s.kind() == Kind::Hole) inspected(m);
        return stuck;
    }
    case Kind::BoolElim: {
        const Term& s = m.kid(1);
        if (!is_value(s)) return congruence(1);
        if (s.kind() == Kind::TrueV) return stepped(m.kid(2));
        if (s.kind() == Kind::FalseV) return stepped(m.kid(3));
        if (erased && s.kind() == Kind::Hole) inspected(m);
        return stuck;
    }
    case Kind::Return:
        return congruence(0);
    case Kind::Bind: {
        const Term& b = m.kid(0);
        if (!is_value(b)) return congruence(0);
        if (b.kind() == Kind::Return) return stepped(instantiate(m.kid(1), b.kid(0)));
        if (erased && b.kind() == Kind::Hole) inspected(m);
        return stuck;
    }
    case Kind::SendOp:
    case Kind::SendGhostOp:
    case Kind::RecvOp:
    case Kind::RecvGhostOp:
    case Kind::CloseOp:
    case Kind::WaitOp:
        return congruence(0);
    default:
        return stuck;
    }
}

}  // namespace detail

StepResult cbv_step(const Term& m) { return detail::step(m, false); }

Decomposition decompose(const Term& m) {
    if (!is_thunk(m)) fail(ErrorCode::NotAThunk, pretty(m) + " is not a suspended communication", m.get());
    Decomposition d;
    Term t = m;
    while (t.kind() == Kind::Bind) {
        d.context.push_back({t.name(), t.kid(1)});
        t = t.kid(0);
    }
    d.head = t;
    return d;
}

Term plug(const EvalContext& ctx, const Term& filler) {
    Term t = filler;
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) t = mk::bind(t, it->binder, it->body);
    return t;
}

Evaluated eval_to_value(const Term& m, std::size_t max_steps) {
    Term t = m;
    for (std::size_t n = 0;; ++n) {
        StepResult r = cbv_step(t);
        if (r.kind != StepKind::Stepped) return {t, n};
        if (n == max_steps)
            fail(ErrorCode::StepBudgetExceeded, "no value after " + std::to_string(max_steps) + " steps", m.get());
        t = std::move(r.term);
    }
}

}  // namespace tllc
