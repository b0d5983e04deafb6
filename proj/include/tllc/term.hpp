#pragma once

// Core syntax: one term language for programs, types, protocols and runtime
// channels. Variables are de Bruijn indices; names are printing hints only.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tllc {

enum class Sort : std::uint8_t { U, L };
enum class Polarity : std::uint8_t { Send, Recv };
using ChannelId = std::uint32_t;

enum class Kind : std::uint8_t {
    Var,
    SortT,
    PiExp,
    PiImp,
    LamExp,
    LamImp,
    AppExp,
    AppImp,
    SigExp,
    SigImp,
    PairExp,
    PairImp,
    SigElim,
    Unit,
    UnitVal,
    Bool,
    TrueV,
    FalseV,
    BoolElim,
    CType,
    Return,
    Bind,
    Proto,
    End,
    ActExp,
    ActImp,
    Fix,
    ChT,
    HcT,
    ChanLit,
    Fork,
    SendOp,
    SendGhostOp,
    RecvOp,
    RecvGhostOp,
    CloseOp,
    WaitOp,
    Hole,
};

const char* to_string(Kind k);
const char* to_string(Sort s);

struct Node;

// Shared handle to an immutable node.
class Term {
public:
    Term() = default;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const Node* get() const noexcept { return node_.get(); }
    const Node& operator*() const noexcept { return *node_; }
    const Node* operator->() const noexcept { return node_.get(); }
    explicit operator bool() const noexcept { return static_cast<bool>(node_); }

    Kind kind() const noexcept;
    Sort sort() const noexcept;
    Polarity polarity() const noexcept;
    std::uint32_t index() const noexcept;
    ChannelId channel() const noexcept;
    const std::string& name(std::size_t i = 0) const;
    const Term& kid(std::size_t i) const;
    std::size_t arity() const noexcept;
    // Sigma type recorded on a pair by the checkers; null when absent.
    const Term& pair_type() const noexcept;
    std::size_t hash() const noexcept;

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Hole;
    Sort sort = Sort::U;
    Polarity polarity = Polarity::Send;
    std::uint32_t index = 0;   // de Bruijn index for Var, id for ChanLit
    std::uint32_t scope = 0;   // 1 + largest free index, 0 when closed
    bool has_channels = false;
    std::size_t hash = 0;
    std::vector<std::string> names;
    std::vector<Term> kids;
    Term pair_type;
};

// Number of binders a child sits under.
std::uint32_t binder_depth(Kind k, std::size_t child) noexcept;
bool is_binder_kind(Kind k) noexcept;

// Rebuild `t` with new children (and optionally a new pair annotation),
// keeping tags and names. Returns `t` itself when nothing changed.
Term with_kids(const Term& t, std::vector<Term> kids, Term pair_type = {});
Term with_pair_type(const Term& t, Term pair_type);
Term without_pair_type(const Term& t);

namespace mk {
Term var(std::uint32_t index, std::string hint = {});
Term sort(Sort s);
Term pi_exp(Sort s, std::string x, Term a, Term b);
Term pi_imp(Sort s, std::string x, Term a, Term b);
Term lam_exp(Sort s, std::string x, Term a, Term body);
Term lam_imp(Sort s, std::string x, Term a, Term body);
Term app_exp(Term f, Term a);
Term app_imp(Term f, Term a);
Term sig_exp(Sort s, std::string x, Term a, Term b);
Term sig_imp(Sort s, std::string x, Term a, Term b);
Term pair_exp(Term m, Term n, Sort s);
Term pair_imp(Term m, Term n, Sort s);
// motive is under z; branch under x (index 1) and y (index 0)
Term sig_elim(std::string z, Term motive, Term scrutinee, std::string x, std::string y, Term branch);
Term unit();
Term unit_val();
Term bool_t();
Term true_v();
Term false_v();
Term bool_elim(std::string z, Term motive, Term scrutinee, Term if_true, Term if_false);
Term c_type(Term a);
Term ret(Term m);
Term bind(Term m, std::string x, Term body);
Term proto();
Term end();
Term act_exp(Polarity p, std::string x, Term a, Term b);
Term act_imp(Polarity p, std::string x, Term a, Term b);
Term fix(std::string x, Term a, Term body);
Term ch(Term a);
Term hc(Term a);
Term chan(ChannelId c);
Term fork(std::string x, Term annotation, Term body);
Term send(Term m);
Term send_ghost(Term m);
Term recv(Term m);
Term recv_ghost(Term m);
Term close(Term m);
Term wait(Term m);
Term hole();
Term make(Kind k, std::vector<std::string> names, std::vector<Term> kids, Sort s = Sort::U,
          Polarity p = Polarity::Send, std::uint32_t index = 0, Term pair_type = {});
}  // namespace mk

// Adds `d` to every free index >= cutoff.
Term shift(const Term& t, std::int64_t d, std::uint32_t cutoff = 0);
// Replaces free index `j` by `value` and closes the gap. `value` lives in the
// context outside the j binders that sit below index j.
Term substitute(const Term& t, std::uint32_t j, const Term& value);
// body[value/0]
Term instantiate(const Term& body, const Term& value);
// body[outer/1, inner/0], for the two binders of a pair elimination
Term instantiate2(const Term& body, const Term& outer, const Term& inner);

// Structural equality ignoring name hints and pair annotations.
bool alpha_eq(const Term& a, const Term& b);
// Total order consistent with alpha_eq.
int compare(const Term& a, const Term& b);

struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};
struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};
struct TermEq {
    bool operator()(const Term& a, const Term& b) const { return alpha_eq(a, b); }
};

bool occurs_free(const Term& t, std::uint32_t index);
std::set<std::uint32_t> free_indices(const Term& t);
// Free variables by their name hints.
std::set<std::string> free_vars(const Term& t);
std::set<ChannelId> free_channels(const Term& t);
bool is_closed(const Term& t) noexcept;

template <class Map>
Term rename_channels(const Term& t, const Map& renaming);

Term rename_channels_fn(const Term& t, ChannelId (*f)(ChannelId, const void*), const void* ctx);

template <class Map>
Term rename_channels(const Term& t, const Map& renaming) {
    return rename_channels_fn(
        t,
        [](ChannelId c, const void* ctx) -> ChannelId {
            const auto& m = *static_cast<const Map*>(ctx);
            auto it = m.find(c);
            return it == m.end() ? c : it->second;
        },
        &renaming);
}

std::size_t term_size(const Term& t);

}  // namespace tllc
