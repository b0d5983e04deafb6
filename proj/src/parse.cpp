#include "tllc/parse.hpp"

#include <cctype>
#include <map>

#include "tllc/print.hpp"

namespace tllc {

namespace {

enum class Tok { Ident, Number, Channel, Symbol, Hole, Eof };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

const char* const hole_utf8 = "\xE2\x96\xA1";

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
    };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.compare(i, 2, "--") == 0) {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string word = src.substr(i, j - i);
            if ((word == "send" || word == "recv") && j < src.size() && src[j] == '~') {
                word += '~';
                ++j;
            }
            out.push_back({Tok::Ident, word, pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '#') {
            std::size_t j = c == '#' ? i + 1 : i;
            std::size_t start = j;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j == start) throw SourceError(ErrorCode::Syntax, "expected digits after '#'", pos);
            out.push_back({c == '#' ? Tok::Channel : Tok::Number, src.substr(start, j - start), pos});
            advance(j - i);
            continue;
        }
        if (src.compare(i, 3, hole_utf8) == 0) {
            out.push_back({Tok::Hole, hole_utf8, pos});
            advance(3);
            continue;
        }
        static const char* const two[] = {":=", "=>", "->", "<="};
        bool matched = false;
        for (const char* s : two) {
            if (src.compare(i, 2, s) == 0) {
                out.push_back({Tok::Symbol, s, pos});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("(){}[]<>,.:^!?").find(c) != std::string::npos) {
            out.push_back({Tok::Symbol, std::string(1, c), pos});
            advance(1);
            continue;
        }
        throw SourceError(ErrorCode::Syntax, std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({Tok::Eof, "", {line, col}});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, SpanTable& spans) : toks_(std::move(toks)), spans_(spans) {}

    SourceFile file() {
        SourceFile out;
        while (!at_eof()) {
            const Token& t = peek();
            if (is("def")) {
                next();
                Definition d = definition(expect_ident("definition name"), t.pos);
                if (defs_.count(d.name) || (out.main && d.name == "main"))
                    throw SourceError(ErrorCode::DuplicateName, "'" + d.name + "' is defined twice", t.pos);
                defs_[d.name] = d.body;
                out.defs.push_back(std::move(d));
            } else if (is("main")) {
                next();
                if (out.main) throw SourceError(ErrorCode::DuplicateName, "more than one main", t.pos);
                out.main = definition("main", t.pos);
            } else if (is("scope")) {
                next();
                ChannelId a = channel(), b = channel();
                expect(":");
                out.scopes.push_back({a, b, term(), t.pos});
            } else if (is("proc")) {
                next();
                expect(":=");
                out.procs.push_back(term());
            } else {
                error("expected def, main, scope or proc");
            }
        }
        if (out.main && (!out.scopes.empty() || !out.procs.empty()))
            throw SourceError(ErrorCode::Syntax, "a file holds either main or a configuration", out.main->pos);
        if (!out.main && out.scopes.empty() && out.procs.empty())
            throw SourceError(ErrorCode::Syntax, "empty source", peek().pos);
        return out;
    }

    Term lone_term(const std::vector<Definition>& defs) {
        for (const Definition& d : defs) defs_[d.name] = d.body;
        Term t = term();
        if (!at_eof()) error("trailing input");
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at_eof() const { return peek().kind == Tok::Eof; }
    bool is(const char* s, std::size_t k = 0) const {
        const Token& t = peek(k);
        return (t.kind == Tok::Ident || t.kind == Tok::Symbol) && t.text == s;
    }

    [[noreturn]] void error(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
        throw SourceError(ErrorCode::Syntax, msg + ", found " + found, t.pos);
    }

    void expect(const char* s) {
        if (!is(s)) error(std::string("expected '") + s + "'");
        next();
    }

    std::string expect_ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || is_keyword(t.text)) error(std::string("expected ") + what);
        next();
        return t.text;
    }

    ChannelId channel() {
        if (peek().kind != Tok::Channel) error("expected a channel #n");
        return static_cast<ChannelId>(std::stoul(next().text));
    }

    Sort sort() {
        if (is("U")) {
            next();
            return Sort::U;
        }
        if (is("L")) {
            next();
            return Sort::L;
        }
        error("expected sort U or L");
    }

    Term at(Term t, SourcePos p) {
        spans_[t.get()] = p;
        return t;
    }

    Definition definition(std::string name, SourcePos p) {
        expect(":");
        Term type = term();
        expect(":=");
        Term body = term();
        return {std::move(name), type, body, p};
    }

    Term under(const std::vector<std::string>& names) {
        for (const auto& n : names) env_.push_back(n);
        Term t = term();
        env_.resize(env_.size() - names.size());
        return t;
    }

    // ( x : A ) or { x : A }; returns true for braces.
    bool binder(std::string& x, Term& a) {
        bool braces = is("{");
        if (!braces && !is("(")) error("expected '(' or '{'");
        next();
        x = peek().kind == Tok::Ident && peek().text == "_" ? (next(), "_") : expect_ident("binder name");
        expect(":");
        a = term();
        expect(braces ? "}" : ")");
        return braces;
    }

    Term term() {
        const Token& t = peek();
        const SourcePos p = t.pos;
        std::string x;
        Term a;
        if (is("forall") || is("fn") || is("sig")) {
            std::string kw = next().text;
            expect("^");
            Sort s = sort();
            bool imp = binder(x, a);
            expect(kw == "forall" ? "->" : kw == "fn" ? "=>" : ".");
            Term b = under({x});
            if (kw == "forall") return at(imp ? mk::pi_imp(s, x, a, b) : mk::pi_exp(s, x, a, b), p);
            if (kw == "fn") return at(imp ? mk::lam_imp(s, x, a, b) : mk::lam_exp(s, x, a, b), p);
            return at(imp ? mk::sig_imp(s, x, a, b) : mk::sig_exp(s, x, a, b), p);
        }
        if (is("!") || is("?")) {
            Polarity pol = next().text == "!" ? Polarity::Send : Polarity::Recv;
            bool imp = binder(x, a);
            expect(".");
            Term b = under({x});
            return at(imp ? mk::act_imp(pol, x, a, b) : mk::act_exp(pol, x, a, b), p);
        }
        if (is("fix")) {
            next();
            if (binder(x, a)) error("fix takes (x : A)");
            expect(".");
            return at(mk::fix(x, a, under({x})), p);
        }
        if (is("fork")) {
            next();
            if (binder(x, a)) error("fork takes (x : A)");
            expect("with");
            return at(mk::fork(x, a, under({x})), p);
        }
        if (is("let")) {
            next();
            x = is("_") ? (next(), "_") : expect_ident("binder name");
            expect("<=");
            Term m = term();
            expect("in");
            return at(mk::bind(m, x, under({x})), p);
        }
        if (is("elim")) {
            next();
            Term m = term();
            expect("as");
            auto [z, motive] = motive_annotation();
            expect("with");
            expect("<");
            std::string l = is("_") ? (next(), "_") : expect_ident("binder name");
            expect(",");
            std::string r = is("_") ? (next(), "_") : expect_ident("binder name");
            expect(">");
            expect("=>");
            return at(mk::sig_elim(z, motive, m, l, r, under({l, r})), p);
        }
        if (is("if")) {
            next();
            Term m = term();
            expect("as");
            auto [z, motive] = motive_annotation();
            expect("then");
            Term n1 = term();
            expect("else");
            Term n2 = term();
            return at(mk::bool_elim(z, motive, m, n1, n2), p);
        }
        return application();
    }

    std::pair<std::string, Term> motive_annotation() {
        expect("[");
        std::string z = is("_") ? (next(), "_") : expect_ident("motive binder");
        expect(".");
        Term c = under({z});
        expect("]");
        return {z, c};
    }

    bool starts_atom() const {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Channel:
        case Tok::Hole:
            return true;
        case Tok::Symbol:
            return t.text == "(" || t.text == "<";
        case Tok::Ident:
            if (!is_keyword(t.text)) return true;
            for (const char* k : {"U", "L", "unit", "bool", "true", "false", "proto", "end", "ch", "hc", "C"})
                if (t.text == k) return true;
            return false;
        default:
            return false;
        }
    }

    Term application() {
        const SourcePos p = peek().pos;
        Term f = head();
        for (;;) {
            if (is("{")) {
                next();
                Term a = term();
                expect("}");
                f = at(mk::app_imp(f, a), p);
            } else if (starts_atom()) {
                f = at(mk::app_exp(f, atom()), p);
            } else {
                return f;
            }
        }
    }

    Term head() {
        const SourcePos p = peek().pos;
        static const std::map<std::string, Term (*)(Term)> ops = {
            {"return", mk::ret},    {"send", mk::send},  {"send~", mk::send_ghost}, {"recv", mk::recv},
            {"recv~", mk::recv_ghost}, {"close", mk::close}, {"wait", mk::wait},
        };
        if (peek().kind == Tok::Ident) {
            auto it = ops.find(peek().text);
            if (it != ops.end()) {
                next();
                if (!starts_atom()) error("expected an argument");
                return at(it->second(atom()), p);
            }
        }
        if (!starts_atom()) error("expected a term");
        return atom();
    }

    Term atom() {
        const Token t = next();
        const SourcePos p = t.pos;
        if (t.kind == Tok::Channel) return at(mk::chan(static_cast<ChannelId>(std::stoul(t.text))), p);
        if (t.kind == Tok::Hole) return at(mk::hole(), p);
        if (t.kind == Tok::Symbol && t.text == "(") {
            if (is(")")) {
                next();
                return at(mk::unit_val(), p);
            }
            Term m = term();
            expect(")");
            return m;
        }
        if (t.kind == Tok::Symbol && t.text == "<") {
            bool imp = is("{");
            if (imp) next();
            Term m = term();
            if (imp) expect("}");
            expect(",");
            Term n = term();
            expect(">");
            expect("^");
            Sort s = sort();
            return at(imp ? mk::pair_imp(m, n, s) : mk::pair_exp(m, n, s), p);
        }
        const std::string& w = t.text;
        if (w == "U") return at(mk::sort(Sort::U), p);
        if (w == "L") return at(mk::sort(Sort::L), p);
        if (w == "unit") return at(mk::unit(), p);
        if (w == "bool") return at(mk::bool_t(), p);
        if (w == "true") return at(mk::true_v(), p);
        if (w == "false") return at(mk::false_v(), p);
        if (w == "proto") return at(mk::proto(), p);
        if (w == "end") return at(mk::end(), p);
        if (w == "ch" || w == "hc") {
            expect("<");
            Term a = term();
            expect(">");
            return at(w == "ch" ? mk::ch(a) : mk::hc(a), p);
        }
        if (w == "C") {
            expect("(");
            Term a = term();
            expect(")");
            return at(mk::c_type(a), p);
        }
        for (std::size_t i = env_.size(); i-- > 0;)
            if (env_[i] == w) return at(mk::var(static_cast<std::uint32_t>(env_.size() - 1 - i), w), p);
        auto d = defs_.find(w);
        if (d != defs_.end()) return d->second;
        throw SourceError(ErrorCode::UnboundVariable, "unbound identifier '" + w + "'", p);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    SpanTable& spans_;
    std::vector<std::string> env_;
    std::map<std::string, Term> defs_;
};

}  // namespace

RawConfig SourceFile::config() const {
    std::vector<RawConfig> parts;
    for (const Term& p : procs) parts.push_back(raw_proc(p));
    RawConfig body = raw_par(std::move(parts));
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
        body = raw_restrict(it->ch_end, it->hc_end, it->protocol, std::move(body));
    return body;
}

SourceFile parse_source(const std::string& text) {
    SpanTable spans;
    Parser p(lex(text), spans);
    SourceFile f = p.file();
    f.spans = std::move(spans);
    return f;
}

Term parse_term(const std::string& text, const std::vector<Definition>& defs) {
    SpanTable spans;
    Parser p(lex(text), spans);
    return p.lone_term(defs);
}

std::string format_diagnostic(const KernelError& e, const SpanTable& spans) {
    SourcePos pos;
    if (const auto* s = dynamic_cast<const SourceError*>(&e)) {
        pos = s->pos();
    } else if (e.where()) {
        auto it = spans.find(e.where());
        if (it != spans.end()) pos = it->second;
    }
    return std::string(to_string(e.code())) + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " +
           e.detail();
}

}  // namespace tllc
