#include "tllc/reduction.hpp"

#include <unordered_map>
#include <unordered_set>

#include "tllc/error.hpp"

namespace tllc {

void Fuel::spend(const Node* at) {
    if (left_ == 0) fail(ErrorCode::FuelExhausted, "reduction budget exhausted", at);
    --left_;
}

namespace {

class ReductSet {
public:
    void add(Term t) {
        if (seen_.insert(t).second) items_.push_back(std::move(t));
    }
    std::vector<Term> take() { return std::move(items_); }

private:
    std::unordered_set<Term, TermHash, TermEq> seen_;
    std::vector<Term> items_;
};

class Reducer {
public:
    const std::vector<Term>& reducts(const Term& t) {
        auto it = memo_.find(t.get());
        if (it != memo_.end()) return it->second;
        std::vector<Term> out = compute(t);
        keep_.push_back(t);
        return memo_.emplace(t.get(), std::move(out)).first->second;
    }

private:
    std::vector<Term> compute(const Term& t) {
        ReductSet out;
        const std::size_t n = t.arity();
        if (n == 0) {
            out.add(t);
            return out.take();
        }

        // Congruence: every combination of child reducts.
        std::vector<const std::vector<Term>*> sets;
        sets.reserve(n);
        for (std::size_t i = 0; i < n; ++i) sets.push_back(&reducts(t.kid(i)));
        std::vector<std::size_t> pos(n, 0);
        for (;;) {
            std::vector<Term> kids;
            kids.reserve(n);
            for (std::size_t i = 0; i < n; ++i) kids.push_back((*sets[i])[pos[i]]);
            out.add(with_kids(t, std::move(kids), t.pair_type()));
            std::size_t i = 0;
            while (i < n && ++pos[i] == sets[i]->size()) pos[i++] = 0;
            if (i == n) break;
        }

        switch (t.kind()) {
        case Kind::AppExp:
        case Kind::AppImp: {
            const Term& f = t.kid(0);
            Kind lam = t.kind() == Kind::AppExp ? Kind::LamExp : Kind::LamImp;
            if (f.kind() != lam) break;
            for (const Term& body : reducts(f.kid(1)))
                for (const Term& arg : reducts(t.kid(1))) out.add(instantiate(body, arg));
            break;
        }
        case Kind::SigElim: {
            const Term& p = t.kid(1);
            if (p.kind() != Kind::PairExp && p.kind() != Kind::PairImp) break;
            for (const Term& a : reducts(p.kid(0)))
                for (const Term& b : reducts(p.kid(1)))
                    for (const Term& body : reducts(t.kid(2))) out.add(instantiate2(body, a, b));
            break;
        }
        case Kind::BoolElim: {
            Kind s = t.kid(1).kind();
            if (s == Kind::TrueV)
                for (const Term& r : reducts(t.kid(2))) out.add(r);
            if (s == Kind::FalseV)
                for (const Term& r : reducts(t.kid(3))) out.add(r);
            break;
        }
        case Kind::Bind: {
            const Term& m = t.kid(0);
            if (m.kind() != Kind::Return) break;
            for (const Term& v : reducts(m.kid(0)))
                for (const Term& body : reducts(t.kid(1))) out.add(instantiate(body, v));
            break;
        }
        case Kind::Fix: {
            for (const Term& a : reducts(t.kid(0)))
                for (const Term& body : reducts(t.kid(1)))
                    out.add(instantiate(body, mk::fix(t.name(), a, body)));
            break;
        }
        default:
            break;
        }
        return out.take();
    }

    std::unordered_map<const Node*, std::vector<Term>> memo_;
    std::vector<Term> keep_;  // pins memo keys
};

Term develop(const Term& t) {
    switch (t.kind()) {
    case Kind::AppExp:
    case Kind::AppImp: {
        const Term& f = t.kid(0);
        Kind lam = t.kind() == Kind::AppExp ? Kind::LamExp : Kind::LamImp;
        if (f.kind() == lam) return instantiate(develop(f.kid(1)), develop(t.kid(1)));
        break;
    }
    case Kind::SigElim: {
        const Term& p = t.kid(1);
        if (p.kind() == Kind::PairExp || p.kind() == Kind::PairImp)
            return instantiate2(develop(t.kid(2)), develop(p.kid(0)), develop(p.kid(1)));
        break;
    }
    case Kind::BoolElim:
        if (t.kid(1).kind() == Kind::TrueV) return develop(t.kid(2));
        if (t.kid(1).kind() == Kind::FalseV) return develop(t.kid(3));
        break;
    case Kind::Bind:
        if (t.kid(0).kind() == Kind::Return) return instantiate(develop(t.kid(1)), develop(t.kid(0).kid(0)));
        break;
    case Kind::Fix: {
        Term body = develop(t.kid(1));
        return instantiate(body, mk::fix(t.name(), develop(t.kid(0)), body));
    }
    default:
        break;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const Term& k : t->kids) kids.push_back(develop(k));
    return with_kids(t, std::move(kids), t.pair_type());
}

}  // namespace

std::vector<Term> parallel_reducts(const Term& t) {
    Reducer r;
    return r.reducts(t);
}

Term complete_development(const Term& t) { return develop(t); }

Term whnf(const Term& start, Fuel& fuel) {
    Term t = start;
    for (;;) {
        switch (t.kind()) {
        case Kind::AppExp:
        case Kind::AppImp: {
            Term f = whnf(t.kid(0), fuel);
            Kind lam = t.kind() == Kind::AppExp ? Kind::LamExp : Kind::LamImp;
            if (f.kind() == lam) {
                fuel.spend(t.get());
                t = instantiate(f.kid(1), t.kid(1));
                continue;
            }
            return with_kids(t, {f, t.kid(1)});
        }
        case Kind::SigElim: {
            Term s = whnf(t.kid(1), fuel);
            if (s.kind() == Kind::PairExp || s.kind() == Kind::PairImp) {
                fuel.spend(t.get());
                t = instantiate2(t.kid(2), s.kid(0), s.kid(1));
                continue;
            }
            return with_kids(t, {t.kid(0), s, t.kid(2)});
        }
        case Kind::BoolElim: {
            Term s = whnf(t.kid(1), fuel);
            if (s.kind() == Kind::TrueV || s.kind() == Kind::FalseV) {
                fuel.spend(t.get());
                t = s.kind() == Kind::TrueV ? t.kid(2) : t.kid(3);
                continue;
            }
            return with_kids(t, {t.kid(0), s, t.kid(2), t.kid(3)});
        }
        case Kind::Bind: {
            Term m = whnf(t.kid(0), fuel);
            if (m.kind() == Kind::Return) {
                fuel.spend(t.get());
                t = instantiate(t.kid(1), m.kid(0));
                continue;
            }
            return with_kids(t, {m, t.kid(1)});
        }
        case Kind::Fix:
            fuel.spend(t.get());
            t = instantiate(t.kid(1), t);
            continue;
        default:
            return t;
        }
    }
}

Term whnf(const Term& t, std::size_t budget) {
    Fuel fuel(budget);
    return whnf(t, fuel);
}

bool convertible(const Term& a, const Term& b, Fuel& fuel) {
    if (alpha_eq(a, b)) return true;
    Term x = whnf(a, fuel);
    Term y = whnf(b, fuel);
    if (alpha_eq(x, y)) return true;
    if (x.kind() != y.kind() || x.sort() != y.sort() || x.polarity() != y.polarity() ||
        x.index() != y.index() || x.arity() != y.arity())
        return false;
    for (std::size_t i = 0; i < x.arity(); ++i)
        if (!convertible(x.kid(i), y.kid(i), fuel)) return false;
    return true;
}

bool convertible(const Term& a, const Term& b, std::size_t budget) {
    Fuel fuel(budget);
    return convertible(a, b, fuel);
}

}  // namespace tllc
