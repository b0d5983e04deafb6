#include "tllc/print.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace tllc {

namespace {

constexpr std::array<std::string_view, 33> keywords = {
    "forall", "fn",   "sig",   "elim", "as",    "with",  "if",    "then",  "else",  "return",
    "let",    "in",   "proto", "end",  "fix",   "ch",    "hc",    "C",     "fork",  "send",
    "recv",   "close", "wait", "unit", "bool",  "true",  "false", "U",     "L",
    "def",    "main", "scope", "proc",
};

enum Prec { Binder = 0, Apply = 1, Atom = 2 };

class Printer {
public:
    explicit Printer(std::vector<std::string> env) : env_(std::move(env)) {}

    std::string print(const Term& t, int prec) {
        std::string s = body(t);
        return level(t) < prec ? "(" + s + ")" : s;
    }

private:
    static int level(const Term& t) {
        switch (t.kind()) {
        case Kind::PiExp:
        case Kind::PiImp:
        case Kind::LamExp:
        case Kind::LamImp:
        case Kind::SigExp:
        case Kind::SigImp:
        case Kind::SigElim:
        case Kind::BoolElim:
        case Kind::Bind:
        case Kind::ActExp:
        case Kind::ActImp:
        case Kind::Fix:
        case Kind::Fork:
            return Binder;
        case Kind::AppExp:
        case Kind::AppImp:
        case Kind::Return:
        case Kind::SendOp:
        case Kind::SendGhostOp:
        case Kind::RecvOp:
        case Kind::RecvGhostOp:
        case Kind::CloseOp:
        case Kind::WaitOp:
            return Apply;
        default:
            return Atom;
        }
    }

    bool taken(const std::string& n) const {
        return is_keyword(n) || std::find(env_.begin(), env_.end(), n) != env_.end();
    }

    // Picks a printable name for a binder whose body is `scope` (index 0 is the binder).
    std::string fresh(const std::string& hint, const Term& scope) {
        bool used = occurs_free(scope, 0);
        std::string base = hint.empty() || (hint == "_" && used) ? "x" : hint;
        if (base == "_") return base;
        if (!taken(base)) return base;
        for (int i = 1;; ++i) {
            std::string cand = base + std::to_string(i);
            if (!taken(cand)) return cand;
        }
    }

    std::string under(const std::string& name, const Term& t, int prec) {
        env_.push_back(name);
        std::string s = print(t, prec);
        env_.pop_back();
        return s;
    }

    static std::string sort_tag(const Term& t) { return std::string("^") + to_string(t.sort()); }

    std::string binder(const char* open, const char* close, const Term& t) {
        std::string x = fresh(t.name(), t.kid(1));
        std::string a = print(t.kid(0), Binder);
        return std::string(open) + x + " : " + a + close + under(x, t.kid(1), Binder);
    }

    std::string body(const Term& t) {
        switch (t.kind()) {
        case Kind::Var: {
            std::uint32_t i = t.index();
            if (i < env_.size()) return env_[env_.size() - 1 - i];
            return t.name().empty() ? "?" + std::to_string(i) : t.name();
        }
        case Kind::SortT: return to_string(t.sort());
        case Kind::PiExp: return "forall" + sort_tag(t) + " " + binder("(", ") -> ", t);
        case Kind::PiImp: return "forall" + sort_tag(t) + " " + binder("{", "} -> ", t);
        case Kind::LamExp: return "fn" + sort_tag(t) + " " + binder("(", ") => ", t);
        case Kind::LamImp: return "fn" + sort_tag(t) + " " + binder("{", "} => ", t);
        case Kind::SigExp: return "sig" + sort_tag(t) + " " + binder("(", "). ", t);
        case Kind::SigImp: return "sig" + sort_tag(t) + " " + binder("{", "}. ", t);
        case Kind::ActExp:
            return std::string(t.polarity() == Polarity::Send ? "!" : "?") + binder("(", "). ", t);
        case Kind::ActImp:
            return std::string(t.polarity() == Polarity::Send ? "!" : "?") + binder("{", "}. ", t);
        case Kind::Fix: return "fix " + binder("(", "). ", t);
        case Kind::Fork: {
            std::string x = fresh(t.name(), t.kid(1));
            std::string a = print(t.kid(0), Binder);
            return "fork (" + x + " : " + a + ") with " + under(x, t.kid(1), Binder);
        }
        case Kind::AppExp: return print(t.kid(0), Apply) + " " + print(t.kid(1), Atom);
        case Kind::AppImp: return print(t.kid(0), Apply) + " {" + print(t.kid(1), Binder) + "}";
        case Kind::PairExp:
            return "<" + print(t.kid(0), Binder) + ", " + print(t.kid(1), Binder) + ">" + sort_tag(t);
        case Kind::PairImp:
            return "<{" + print(t.kid(0), Binder) + "}, " + print(t.kid(1), Binder) + ">" + sort_tag(t);
        case Kind::SigElim: {
            std::string z = fresh(t.name(0), t.kid(0));
            std::string scrut = print(t.kid(1), Binder);
            std::string motive = under(z, t.kid(0), Binder);
            // x is index 1 and y index 0 inside the branch
            bool x_used = occurs_free(t.kid(2), 1);
            std::string x = t.name(1).empty() || (t.name(1) == "_" && x_used) ? "x" : t.name(1);
            if (x != "_" && taken(x)) x = fresh(x, mk::var(0));
            env_.push_back(x);
            std::string y = fresh(t.name(2), t.kid(2));
            std::string branch = under(y, t.kid(2), Binder);
            env_.pop_back();
            return "elim " + scrut + " as [" + z + ". " + motive + "] with <" + x + ", " + y + "> => " + branch;
        }
        case Kind::Unit: return "unit";
        case Kind::UnitVal: return "()";
        case Kind::Bool: return "bool";
        case Kind::TrueV: return "true";
        case Kind::FalseV: return "false";
        case Kind::BoolElim: {
            std::string z = fresh(t.name(0), t.kid(0));
            return "if " + print(t.kid(1), Binder) + " as [" + z + ". " + under(z, t.kid(0), Binder) + "] then " +
                   print(t.kid(2), Binder) + " else " + print(t.kid(3), Binder);
        }
        case Kind::CType: return "C(" + print(t.kid(0), Binder) + ")";
        case Kind::Return: return "return " + print(t.kid(0), Atom);
        case Kind::Bind: {
            std::string x = fresh(t.name(), t.kid(1));
            std::string m = print(t.kid(0), Binder);
            return "let " + x + " <= " + m + " in " + under(x, t.kid(1), Binder);
        }
        case Kind::Proto: return "proto";
        case Kind::End: return "end";
        case Kind::ChT: return "ch<" + print(t.kid(0), Binder) + ">";
        case Kind::HcT: return "hc<" + print(t.kid(0), Binder) + ">";
        case Kind::ChanLit: return "#" + std::to_string(t.channel());
        case Kind::SendOp: return "send " + print(t.kid(0), Atom);
        case Kind::SendGhostOp: return "send~ " + print(t.kid(0), Atom);
        case Kind::RecvOp: return "recv " + print(t.kid(0), Atom);
        case Kind::RecvGhostOp: return "recv~ " + print(t.kid(0), Atom);
        case Kind::CloseOp: return "close " + print(t.kid(0), Atom);
        case Kind::WaitOp: return "wait " + print(t.kid(0), Atom);
        case Kind::Hole: return "\xE2\x96\xA1";
        }
        return "?";
    }

    std::vector<std::string> env_;
};

}  // namespace

bool is_keyword(const std::string& word) {
    return std::find(keywords.begin(), keywords.end(), word) != keywords.end();
}

std::string pretty(const Term& t, const std::vector<std::string>& names) {
    Printer p(names);
    return p.print(t, Binder);
}

}  // namespace tllc
