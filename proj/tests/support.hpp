#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tllc/cli.hpp"
#include "tllc/reduction.hpp"
#include "tllc/term.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path corpus_dir() { return fs::path(TLLC_SOURCE_DIR) / "tests" / "corpus"; }

inline std::vector<fs::path> corpus(const std::string& sub) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(corpus_dir() / sub))
        if (e.path().extension() == ".tll") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline tllc::LoadedProgram load(const fs::path& p) { return tllc::load_program(read_file(p)); }

// The code named on a `-- expect: CODE` first line.
inline std::string expected_code(const fs::path& p) {
    std::string first = read_file(p).substr(0, read_file(p).find('\n'));
    const std::string tag = "-- expect: ";
    return first.rfind(tag, 0) == 0 ? first.substr(tag.size()) : std::string{};
}

// Programs whose main forks at least once.
inline bool concurrent(const tllc::Term& t) {
    if (t.kind() == tllc::Kind::Fork) return true;
    for (std::size_t i = 0; i < t.arity(); ++i)
        if (concurrent(t.kid(i))) return true;
    return false;
}

// Random well-scoped terms. Every parallel-step redex shape is generated on
// purpose, not only by luck.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed) : rng_(seed) {}

    tllc::Term term(int depth, std::uint32_t scope) {
        using namespace tllc;
        if (depth <= 0) return leaf(scope);
        const int d = depth - 1;
        switch (pick(24)) {
        case 0: return mk::app_exp(mk::lam_exp(sort(), "x", term(d - 1, scope), term(d - 1, scope + 1)), term(d, scope));
        case 1: return mk::app_imp(mk::lam_imp(sort(), "x", term(d - 1, scope), term(d - 1, scope + 1)), term(d, scope));
        case 2:
            return mk::sig_elim("z", term(d, scope + 1), mk::pair_exp(term(d - 1, scope), term(d - 1, scope), sort()),
                                "x", "y", term(d, scope + 2));
        case 3:
            return mk::sig_elim("z", term(d, scope + 1), mk::pair_imp(term(d - 1, scope), term(d - 1, scope), sort()),
                                "x", "y", term(d, scope + 2));
        case 4:
            return mk::bool_elim("z", term(d, scope + 1), coin() ? mk::true_v() : mk::false_v(), term(d, scope),
                                 term(d, scope));
        case 5: return mk::bind(mk::ret(term(d - 1, scope)), "x", term(d, scope + 1));
        case 6: return mk::fix("X", term(d, scope), term(d, scope + 1));
        case 7: return mk::lam_exp(sort(), "x", term(d, scope), term(d, scope + 1));
        case 8: return mk::lam_imp(sort(), "x", term(d, scope), term(d, scope + 1));
        case 9: return mk::app_exp(term(d, scope), term(d, scope));
        case 10: return mk::app_imp(term(d, scope), term(d, scope));
        case 11: return mk::pi_exp(sort(), "x", term(d, scope), term(d, scope + 1));
        case 12: return mk::sig_imp(sort(), "x", term(d, scope), term(d, scope + 1));
        case 13: return mk::pair_exp(term(d, scope), term(d, scope), sort());
        case 14: return mk::sig_elim("z", term(d, scope + 1), term(d, scope), "x", "y", term(d, scope + 2));
        case 15: return mk::bool_elim("z", term(d, scope + 1), term(d, scope), term(d, scope), term(d, scope));
        case 16: return mk::c_type(term(d, scope));
        case 17: return mk::bind(term(d, scope), "x", term(d, scope + 1));
        case 18:
            return coin() ? mk::act_exp(coin() ? Polarity::Send : Polarity::Recv, "x", term(d, scope), term(d, scope + 1))
                          : mk::act_imp(coin() ? Polarity::Send : Polarity::Recv, "x", term(d, scope),
                                        term(d, scope + 1));
        case 19: return coin() ? mk::ch(term(d, scope)) : mk::hc(term(d, scope));
        case 20: return mk::fork("x", term(d, scope), term(d, scope + 1));
        case 21: {
            Term c = term(d, scope);
            switch (pick(6)) {
            case 0: return mk::send(c);
            case 1: return mk::send_ghost(c);
            case 2: return mk::recv(c);
            case 3: return mk::recv_ghost(c);
            case 4: return mk::close(c);
            default: return mk::wait(c);
            }
        }
        case 22: return mk::ret(term(d, scope));
        default: return mk::pair_imp(term(d, scope), term(d, scope), sort());
        }
    }

    std::mt19937_64& rng() { return rng_; }
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool coin() { return rng_() & 1; }

private:
    tllc::Sort sort() { return coin() ? tllc::Sort::U : tllc::Sort::L; }

    tllc::Term leaf(std::uint32_t scope) {
        using namespace tllc;
        std::size_t k = pick(scope > 0 ? 12 : 9);
        switch (k) {
        case 0: return mk::unit_val();
        case 1: return mk::true_v();
        case 2: return mk::false_v();
        case 3: return mk::unit();
        case 4: return mk::bool_t();
        case 5: return mk::proto();
        case 6: return mk::end();
        case 7: return mk::sort(sort());
        case 8: return mk::chan(static_cast<ChannelId>(pick(3)));
        default: return mk::var(static_cast<std::uint32_t>(pick(scope)));
        }
    }

    std::mt19937_64 rng_;
};

// Redex shapes present anywhere in t, keyed by rule name.
inline void redex_shapes(const tllc::Term& t, std::map<std::string, std::size_t>& out) {
    using tllc::Kind;
    switch (t.kind()) {
    case Kind::AppExp:
        if (t.kid(0).kind() == Kind::LamExp) ++out["beta-explicit"];
        break;
    case Kind::AppImp:
        if (t.kid(0).kind() == Kind::LamImp) ++out["beta-implicit"];
        break;
    case Kind::SigElim:
        if (t.kid(1).kind() == Kind::PairExp) ++out["pair-explicit"];
        if (t.kid(1).kind() == Kind::PairImp) ++out["pair-implicit"];
        break;
    case Kind::BoolElim:
        if (t.kid(1).kind() == Kind::TrueV) ++out["true-elim"];
        if (t.kid(1).kind() == Kind::FalseV) ++out["false-elim"];
        break;
    case Kind::Bind:
        if (t.kid(0).kind() == Kind::Return) ++out["bind-return"];
        break;
    case Kind::Fix: ++out["unfold"]; break;
    case Kind::ChanLit: ++out["channel"]; break;
    default: break;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) redex_shapes(t.kid(i), out);
}

// Terms for the diamond check. Reduct sets grow exponentially with the number
// of independent redexes, so terms with more than `cap` one-step reducts are
// drawn again; `rejected` counts those.
inline tllc::Term diamond_sample(TermGen& gen, std::size_t& rejected, std::size_t cap = 64) {
    for (;;) {
        tllc::Term t = gen.term(4, static_cast<std::uint32_t>(gen.pick(3)));
        if (tllc::parallel_reducts(t).size() <= cap) return t;
        ++rejected;
    }
}

}  // namespace testing
