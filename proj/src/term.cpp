#include "tllc/term.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace tllc {

namespace {

constexpr std::size_t mix(std::size_t h, std::size_t v) noexcept {
    v += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    v ^= v >> 30;
    v *= 0xbf58476d1ce4e5b9ULL;
    v ^= v >> 27;
    return h ^ v;
}

const std::string& empty_name() {
    static const std::string e;
    return e;
}

const Term& null_term() {
    static const Term t;
    return t;
}

}  // namespace

const char* to_string(Kind k) {
    switch (k) {
    case Kind::Var: return "Var";
    case Kind::SortT: return "SortT";
    case Kind::PiExp: return "PiExp";
    case Kind::PiImp: return "PiImp";
    case Kind::LamExp: return "LamExp";
    case Kind::LamImp: return "LamImp";
    case Kind::AppExp: return "AppExp";
    case Kind::AppImp: return "AppImp";
    case Kind::SigExp: return "SigExp";
    case Kind::SigImp: return "SigImp";
    case Kind::PairExp: return "PairExp";
    case Kind::PairImp: return "PairImp";
    case Kind::SigElim: return "SigElim";
    case Kind::Unit: return "Unit";
    case Kind::UnitVal: return "UnitVal";
    case Kind::Bool: return "Bool";
    case Kind::TrueV: return "TrueV";
    case Kind::FalseV: return "FalseV";
    case Kind::BoolElim: return "BoolElim";
    case Kind::CType: return "CType";
    case Kind::Return: return "Return";
    case Kind::Bind: return "Bind";
    case Kind::Proto: return "Proto";
    case Kind::End: return "End";
    case Kind::ActExp: return "ActExp";
    case Kind::ActImp: return "ActImp";
    case Kind::Fix: return "Fix";
    case Kind::ChT: return "ChT";
    case Kind::HcT: return "HcT";
    case Kind::ChanLit: return "ChanLit";
    case Kind::Fork: return "Fork";
    case Kind::SendOp: return "SendOp";
    case Kind::SendGhostOp: return "SendGhostOp";
    case Kind::RecvOp: return "RecvOp";
    case Kind::RecvGhostOp: return "RecvGhostOp";
    case Kind::CloseOp: return "CloseOp";
    case Kind::WaitOp: return "WaitOp";
    case Kind::Hole: return "Hole";
    }
    return "?";
}

const char* to_string(Sort s) { return s == Sort::U ? "U" : "L"; }

Kind Term::kind() const noexcept { return node_->kind; }
Sort Term::sort() const noexcept { return node_->sort; }
Polarity Term::polarity() const noexcept { return node_->polarity; }
std::uint32_t Term::index() const noexcept { return node_->index; }
ChannelId Term::channel() const noexcept { return node_->index; }
const std::string& Term::name(std::size_t i) const {
    return i < node_->names.size() ? node_->names[i] : empty_name();
}
const Term& Term::kid(std::size_t i) const { return node_->kids.at(i); }
std::size_t Term::arity() const noexcept { return node_->kids.size(); }
const Term& Term::pair_type() const noexcept { return node_ ? node_->pair_type : null_term(); }
std::size_t Term::hash() const noexcept { return node_->hash; }

std::uint32_t binder_depth(Kind k, std::size_t child) noexcept {
    switch (k) {
    case Kind::PiExp:
    case Kind::PiImp:
    case Kind::LamExp:
    case Kind::LamImp:
    case Kind::SigExp:
    case Kind::SigImp:
    case Kind::ActExp:
    case Kind::ActImp:
    case Kind::Fix:
    case Kind::Fork:
    case Kind::Bind:
        return child == 1 ? 1 : 0;
    case Kind::SigElim:
        return child == 0 ? 1 : child == 2 ? 2 : 0;
    case Kind::BoolElim:
        return child == 0 ? 1 : 0;
    default:
        return 0;
    }
}

bool is_binder_kind(Kind k) noexcept {
    return binder_depth(k, 0) + binder_depth(k, 1) + binder_depth(k, 2) > 0;
}

namespace mk {

Term make(Kind k, std::vector<std::string> names, std::vector<Term> kids, Sort s, Polarity p,
          std::uint32_t index, Term pair_type) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->sort = s;
    n->polarity = p;
    n->index = index;
    n->names = std::move(names);
    n->kids = std::move(kids);
    n->pair_type = std::move(pair_type);

    std::size_t h = mix(static_cast<std::size_t>(k) + 1, static_cast<std::size_t>(s));
    h = mix(h, static_cast<std::size_t>(p));
    h = mix(h, index);
    std::uint32_t scope = k == Kind::Var ? index + 1 : 0;
    bool chans = k == Kind::ChanLit;
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
        const Term& c = n->kids[i];
        assert(c);
        h = mix(h, c.hash());
        std::uint32_t d = binder_depth(k, i);
        if (c->scope > d) scope = std::max(scope, c->scope - d);
        chans = chans || c->has_channels;
    }
    if (n->pair_type && n->pair_type->scope > scope) scope = n->pair_type->scope;
    n->hash = h;
    n->scope = scope;
    n->has_channels = chans;
    return Term(std::move(n));
}

namespace {
Term leaf(Kind k) { return make(k, {}, {}); }
Term unary(Kind k, Term a) { return make(k, {}, {std::move(a)}); }
}  // namespace

Term var(std::uint32_t index, std::string hint) {
    return make(Kind::Var, {std::move(hint)}, {}, Sort::U, Polarity::Send, index);
}
Term sort(Sort s) {
    static const Term u = make(Kind::SortT, {}, {}, Sort::U);
    static const Term l = make(Kind::SortT, {}, {}, Sort::L);
    return s == Sort::U ? u : l;
}
Term pi_exp(Sort s, std::string x, Term a, Term b) {
    return make(Kind::PiExp, {std::move(x)}, {std::move(a), std::move(b)}, s);
}
Term pi_imp(Sort s, std::string x, Term a, Term b) {
    return make(Kind::PiImp, {std::move(x)}, {std::move(a), std::move(b)}, s);
}
Term lam_exp(Sort s, std::string x, Term a, Term body) {
    return make(Kind::LamExp, {std::move(x)}, {std::move(a), std::move(body)}, s);
}
Term lam_imp(Sort s, std::string x, Term a, Term body) {
    return make(Kind::LamImp, {std::move(x)}, {std::move(a), std::move(body)}, s);
}
Term app_exp(Term f, Term a) { return make(Kind::AppExp, {}, {std::move(f), std::move(a)}); }
Term app_imp(Term f, Term a) { return make(Kind::AppImp, {}, {std::move(f), std::move(a)}); }
Term sig_exp(Sort s, std::string x, Term a, Term b) {
    return make(Kind::SigExp, {std::move(x)}, {std::move(a), std::move(b)}, s);
}
Term sig_imp(Sort s, std::string x, Term a, Term b) {
    return make(Kind::SigImp, {std::move(x)}, {std::move(a), std::move(b)}, s);
}
Term pair_exp(Term m, Term n, Sort s) { return make(Kind::PairExp, {}, {std::move(m), std::move(n)}, s); }
Term pair_imp(Term m, Term n, Sort s) { return make(Kind::PairImp, {}, {std::move(m), std::move(n)}, s); }
Term sig_elim(std::string z, Term motive, Term scrutinee, std::string x, std::string y, Term branch) {
    return make(Kind::SigElim, {std::move(z), std::move(x), std::move(y)},
                {std::move(motive), std::move(scrutinee), std::move(branch)});
}
Term unit() {
    static const Term t = leaf(Kind::Unit);
    return t;
}
Term unit_val() {
    static const Term t = leaf(Kind::UnitVal);
    return t;
}
Term bool_t() {
    static const Term t = leaf(Kind::Bool);
    return t;
}
Term true_v() {
    static const Term t = leaf(Kind::TrueV);
    return t;
}
Term false_v() {
    static const Term t = leaf(Kind::FalseV);
    return t;
}
Term bool_elim(std::string z, Term motive, Term scrutinee, Term if_true, Term if_false) {
    return make(Kind::BoolElim, {std::move(z)},
                {std::move(motive), std::move(scrutinee), std::move(if_true), std::move(if_false)});
}
Term c_type(Term a) { return unary(Kind::CType, std::move(a)); }
Term ret(Term m) { return unary(Kind::Return, std::move(m)); }
Term bind(Term m, std::string x, Term body) {
    return make(Kind::Bind, {std::move(x)}, {std::move(m), std::move(body)});
}
Term proto() {
    static const Term t = leaf(Kind::Proto);
    return t;
}
Term end() {
    static const Term t = leaf(Kind::End);
    return t;
}
Term act_exp(Polarity p, std::string x, Term a, Term b) {
    return make(Kind::ActExp, {std::move(x)}, {std::move(a), std::move(b)}, Sort::U, p);
}
Term act_imp(Polarity p, std::string x, Term a, Term b) {
    return make(Kind::ActImp, {std::move(x)}, {std::move(a), std::move(b)}, Sort::U, p);
}
Term fix(std::string x, Term a, Term body) {
    return make(Kind::Fix, {std::move(x)}, {std::move(a), std::move(body)});
}
Term ch(Term a) { return unary(Kind::ChT, std::move(a)); }
Term hc(Term a) { return unary(Kind::HcT, std::move(a)); }
Term chan(ChannelId c) { return make(Kind::ChanLit, {}, {}, Sort::U, Polarity::Send, c); }
Term fork(std::string x, Term annotation, Term body) {
    return make(Kind::Fork, {std::move(x)}, {std::move(annotation), std::move(body)});
}
Term send(Term m) { return unary(Kind::SendOp, std::move(m)); }
Term send_ghost(Term m) { return unary(Kind::SendGhostOp, std::move(m)); }
Term recv(Term m) { return unary(Kind::RecvOp, std::move(m)); }
Term recv_ghost(Term m) { return unary(Kind::RecvGhostOp, std::move(m)); }
Term close(Term m) { return unary(Kind::CloseOp, std::move(m)); }
Term wait(Term m) { return unary(Kind::WaitOp, std::move(m)); }
Term hole() {
    static const Term t = leaf(Kind::Hole);
    return t;
}

}  // namespace mk

Term with_kids(const Term& t, std::vector<Term> kids, Term pair_type) {
    const Node& n = *t;
    bool same = kids.size() == n.kids.size() && pair_type.get() == n.pair_type.get();
    for (std::size_t i = 0; same && i < kids.size(); ++i) same = kids[i].get() == n.kids[i].get();
    if (same) return t;
    return mk::make(n.kind, n.names, std::move(kids), n.sort, n.polarity, n.index, std::move(pair_type));
}

Term with_pair_type(const Term& t, Term pair_type) { return with_kids(t, t->kids, std::move(pair_type)); }

Term without_pair_type(const Term& t) { return with_kids(t, t->kids, Term{}); }

namespace {

// Rewrites every free variable with index >= depth through `f(var, depth)`.
template <class F>
Term map_vars(const Term& t, std::uint32_t depth, const F& f) {
    if (t->scope <= depth) return t;
    if (t.kind() == Kind::Var) return f(t, depth);
    const Node& n = *t;
    std::vector<Term> kids;
    kids.reserve(n.kids.size());
    for (std::size_t i = 0; i < n.kids.size(); ++i)
        kids.push_back(map_vars(n.kids[i], depth + binder_depth(n.kind, i), f));
    Term pt = n.pair_type ? map_vars(n.pair_type, depth, f) : Term{};
    return with_kids(t, std::move(kids), std::move(pt));
}

}  // namespace

Term shift(const Term& t, std::int64_t d, std::uint32_t cutoff) {
    if (d == 0) return t;
    return map_vars(t, cutoff, [d](const Term& v, std::uint32_t) {
        std::int64_t i = static_cast<std::int64_t>(v.index()) + d;
        assert(i >= 0);
        return mk::var(static_cast<std::uint32_t>(i), v.name());
    });
}

Term substitute(const Term& t, std::uint32_t j, const Term& value) {
    // Only indices >= j can change, so start the walk at depth j.
    return map_vars(t, j, [&value, j](const Term& v, std::uint32_t depth) {
        std::uint32_t i = v.index();
        if (i == depth) return shift(value, depth);
        if (i > depth) return mk::var(i - 1, v.name());
        return v;
    });
}

Term instantiate(const Term& body, const Term& value) { return substitute(body, 0, value); }

Term instantiate2(const Term& body, const Term& outer, const Term& inner) {
    return map_vars(body, 0, [&](const Term& v, std::uint32_t depth) {
        std::uint32_t i = v.index();
        if (i == depth) return shift(inner, depth);
        if (i == depth + 1) return shift(outer, depth);
        return mk::var(i - 2, v.name());
    });
}

bool alpha_eq(const Term& a, const Term& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    const Node& x = *a;
    const Node& y = *b;
    if (x.hash != y.hash || x.kind != y.kind || x.sort != y.sort || x.polarity != y.polarity ||
        x.index != y.index || x.kids.size() != y.kids.size())
        return false;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (!alpha_eq(x.kids[i], y.kids[i])) return false;
    return true;
}

int compare(const Term& a, const Term& b) {
    if (a.get() == b.get()) return 0;
    const Node& x = *a;
    const Node& y = *b;
    auto cmp = [](auto p, auto q) { return p < q ? -1 : (q < p ? 1 : 0); };
    if (int c = cmp(x.kind, y.kind)) return c;
    if (int c = cmp(x.sort, y.sort)) return c;
    if (int c = cmp(x.polarity, y.polarity)) return c;
    if (int c = cmp(x.index, y.index)) return c;
    if (int c = cmp(x.kids.size(), y.kids.size())) return c;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (int c = compare(x.kids[i], y.kids[i])) return c;
    return 0;
}

bool occurs_free(const Term& t, std::uint32_t index) {
    if (t->scope <= index) return false;
    if (t.kind() == Kind::Var) return t.index() == index;
    for (std::size_t i = 0; i < t.arity(); ++i)
        if (occurs_free(t.kid(i), index + binder_depth(t.kind(), i))) return true;
    return false;
}

namespace {

void collect_free(const Term& t, std::uint32_t depth, std::set<std::uint32_t>& out,
                  std::vector<std::string>* names, std::set<std::string>* name_out) {
    if (t->scope <= depth) return;
    if (t.kind() == Kind::Var) {
        out.insert(t.index() - depth);
        if (name_out) name_out->insert(t.name());
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i)
        collect_free(t.kid(i), depth + binder_depth(t.kind(), i), out, names, name_out);
}

void collect_channels(const Term& t, std::set<ChannelId>& out) {
    if (!t->has_channels) return;
    if (t.kind() == Kind::ChanLit) {
        out.insert(t.channel());
        return;
    }
    for (const Term& k : t->kids) collect_channels(k, out);
}

}  // namespace

std::set<std::uint32_t> free_indices(const Term& t) {
    std::set<std::uint32_t> out;
    collect_free(t, 0, out, nullptr, nullptr);
    return out;
}

std::set<std::string> free_vars(const Term& t) {
    std::set<std::uint32_t> idx;
    std::set<std::string> names;
    collect_free(t, 0, idx, nullptr, &names);
    return names;
}

std::set<ChannelId> free_channels(const Term& t) {
    std::set<ChannelId> out;
    collect_channels(t, out);
    return out;
}

bool is_closed(const Term& t) noexcept { return t->scope == 0; }

Term rename_channels_fn(const Term& t, ChannelId (*f)(ChannelId, const void*), const void* ctx) {
    if (!t->has_channels) return t;
    if (t.kind() == Kind::ChanLit) {
        ChannelId c = f(t.channel(), ctx);
        return c == t.channel() ? t : mk::chan(c);
    }
    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const Term& k : t->kids) kids.push_back(rename_channels_fn(k, f, ctx));
    return with_kids(t, std::move(kids), t.pair_type());
}

std::size_t term_size(const Term& t) {
    std::size_t n = 1;
    for (const Term& k : t->kids) n += term_size(k);
    return n;
}

}  // namespace tllc
