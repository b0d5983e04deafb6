#include <doctest.h>

#include <algorithm>
#include <functional>
#include <memory>

#include "support.hpp"
#include "tllc/erasure.hpp"
#include "tllc/error.hpp"
#include "tllc/eval.hpp"
#include "tllc/logical.hpp"
#include "tllc/parse.hpp"
#include "tllc/print.hpp"
#include "tllc/program.hpp"

using namespace tllc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const KernelError& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Syntax;
}

const char* ping_text = R"(
main : C(unit) :=
  let c <= fork (x : ch<!(b : bool). end>) with
    (let x <= send x true in close x) in
  let p <= recv c in
  elim p as [z. C(unit)] with <b, c> => wait c
)";

Term ping_main() { return parse_source(ping_text).main->body; }

// Closed subterms of t, t included.
void closed_subterms(const Term& t, std::vector<Term>& out) {
    if (is_closed(t) && !t.get()->has_channels) out.push_back(t);
    for (std::size_t i = 0; i < t.arity(); ++i) closed_subterms(t.kid(i), out);
}

// A fragment small enough to type declaratively by trying every context split.
struct Frag {
    enum K { Wait, Ret, Let, If, AppL, AppU, PairElim } k;
    int v1 = -1, v2 = -1;  // variables used (ids)
    int b1 = -1, b2 = -1;  // variables bound (ids)
    std::unique_ptr<Frag> e1, e2;
};

// Mostly builds terms that consume exactly the variables in `need`; one
// decision in `1/noise` goes astray, so both verdicts are common.
class FragGen {
public:
    FragGen(std::uint64_t seed, unsigned noise) : rng_(seed), noise_(noise) {}

    std::unique_ptr<Frag> gen(int depth, std::vector<int>& scope, std::vector<int> need) {
        if (astray()) {
            if (!need.empty() && coin())
                need.erase(need.begin() + static_cast<long>(rng_() % need.size()));
            else
                need.push_back(scope[rng_() % scope.size()]);
        }
        std::shuffle(need.begin(), need.end(), rng_);
        auto f = std::make_unique<Frag>();
        std::vector<Frag::K> options;
        if (need.empty()) options = {Frag::Ret, Frag::AppU};
        if (need.size() == 1) options.push_back(Frag::Wait);
        if (depth > 0) {
            options.insert(options.end(), {Frag::Let, Frag::If});
            if (!need.empty()) options.push_back(Frag::AppL);
            if (need.size() >= 2) options.push_back(Frag::PairElim);
        }
        if (options.empty()) options = {Frag::Wait};
        f->k = options[rng_() % options.size()];
        if (f->k == Frag::AppU && depth <= 0) f->k = Frag::Ret;
        switch (f->k) {
        case Frag::Wait: f->v1 = need.empty() ? scope[rng_() % scope.size()] : need[0]; break;
        case Frag::Ret: break;
        case Frag::Let: {
            std::vector<int> a, b;
            for (int v : need) (coin() ? a : b).push_back(v);
            f->e1 = gen(depth - 1, scope, a);
            f->e2 = gen(depth - 1, scope, b);
            break;
        }
        case Frag::If:
            f->e1 = gen(depth - 1, scope, need);
            f->e2 = gen(depth - 1, scope, need);
            break;
        case Frag::AppU: f->e1 = gen(depth - 1, scope, {}); break;
        case Frag::AppL: {
            f->v1 = need.back();
            need.pop_back();
            f->b1 = fresh_++;
            need.push_back(f->b1);
            scope.push_back(f->b1);
            f->e1 = gen(depth - 1, scope, need);
            scope.pop_back();
            break;
        }
        case Frag::PairElim: {
            f->v1 = need.back();
            need.pop_back();
            f->v2 = need.back();
            need.pop_back();
            f->b1 = fresh_++;
            f->b2 = fresh_++;
            need.push_back(f->b1);
            need.push_back(f->b2);
            scope.push_back(f->b1);
            scope.push_back(f->b2);
            f->e1 = gen(depth - 1, scope, need);
            scope.pop_back();
            scope.pop_back();
            break;
        }
        }
        return f;
    }

    int fresh_ = 2;  // 0 and 1 are the outer parameters

private:
    bool coin() { return rng_() & 1; }
    bool astray() { return rng_() % noise_ == 0; }
    std::mt19937_64 rng_;
    unsigned noise_;
};

std::string name(int id) { return "c" + std::to_string(id); }

std::string text(const Frag& f) {
    switch (f.k) {
    case Frag::Wait: return "wait " + name(f.v1);
    case Frag::Ret: return "return ()";
    case Frag::Let: return "let _ <= (" + text(*f.e1) + ") in (" + text(*f.e2) + ")";
    case Frag::If: return "if true as [z. C(unit)] then (" + text(*f.e1) + ") else (" + text(*f.e2) + ")";
    case Frag::AppL: return "(fn^L (" + name(f.b1) + " : hc<end>) => " + text(*f.e1) + ") " + name(f.v1);
    case Frag::AppU: return "(fn^U (u : unit) => " + text(*f.e1) + ") ()";
    case Frag::PairElim:
        return "elim <" + name(f.v1) + ", " + name(f.v2) + ">^L as [z. C(unit)] with <" + name(f.b1) + ", " +
               name(f.b2) + "> => (" + text(*f.e1) + ")";
    }
    return {};
}

using Mask = std::uint64_t;
Mask bit(int id) { return Mask{1} << id; }

// Can f be typed with exactly the linear variables in `mask`?
bool declarative(const Frag& f, Mask mask) {
    auto splits = [&](const std::function<bool(Mask, Mask)>& ok) {
        for (Mask a = mask;; a = (a - 1) & mask) {
            if (ok(a, mask & ~a)) return true;
            if (a == 0) return false;
        }
    };
    switch (f.k) {
    case Frag::Wait: return mask == bit(f.v1);
    case Frag::Ret: return mask == 0;
    case Frag::Let:
        return splits([&](Mask a, Mask b) { return declarative(*f.e1, a) && declarative(*f.e2, b); });
    case Frag::If: return declarative(*f.e1, mask) && declarative(*f.e2, mask);
    case Frag::AppL:
        return (mask & bit(f.v1)) && declarative(*f.e1, (mask & ~bit(f.v1)) | bit(f.b1));
    case Frag::AppU: return mask == 0 && declarative(*f.e1, 0);
    case Frag::PairElim: {
        if (f.v1 == f.v2) return false;
        Mask pair = bit(f.v1) | bit(f.v2);
        if ((mask & pair) != pair) return false;
        return declarative(*f.e1, (mask & ~pair) | bit(f.b1) | bit(f.b2));
    }
    }
    return false;
}

}  // namespace

TEST_SUITE("logical") {

TEST_CASE("inference examples") {
    Term id = mk::lam_imp(Sort::U, "A", mk::sort(Sort::U), mk::lam_exp(Sort::U, "x", mk::var(0), mk::var(0)));
    Term expected = mk::pi_imp(Sort::U, "A", mk::sort(Sort::U), mk::pi_exp(Sort::U, "x", mk::var(0), mk::var(1)));
    CHECK(alpha_eq(infer_logical({}, id), expected));
    CHECK(alpha_eq(infer_logical({}, mk::proto()), mk::sort(Sort::U)));
    CHECK(alpha_eq(infer_logical({}, mk::ch(mk::end())), mk::sort(Sort::L)));
}

TEST_CASE("sort examples") {
    CHECK(sort_of({}, mk::bool_t()) == Sort::U);
    CHECK(sort_of({}, mk::c_type(mk::unit())) == Sort::L);
    CHECK(sort_of({}, mk::sig_exp(Sort::L, "x", mk::ch(mk::end()), mk::c_type(mk::unit()))) == Sort::L);
    CHECK(code_of([] { sort_of({}, mk::sig_exp(Sort::U, "x", mk::ch(mk::end()), mk::unit())); }) ==
          ErrorCode::SigSortViolation);
}

TEST_CASE("context validity") {
    CHECK_NOTHROW(check_logical_context({}));
    CHECK_NOTHROW(check_logical_context({{"A", mk::sort(Sort::U)}, {"x", mk::var(0)}}));
    CHECK(code_of([] { check_logical_context({{"x", mk::unit_val()}}); }) == ErrorCode::NotASort);
}

TEST_CASE("recursive protocols are guarded") {
    Term ok = parse_term("fix (X : proto). !(b : bool). X");
    CHECK(alpha_eq(infer_logical({}, ok), mk::proto()));
    Term bad = parse_term("fix (X : proto). ?(_ : X). X");
    CHECK(code_of([&] { infer_logical({}, bad); }) == ErrorCode::GuardViolation);
    Term family = parse_term("fix (X : forall^U (b : bool) -> proto). fn^U (b : bool) => !(c : bool). X c");
    CHECK_NOTHROW(infer_logical({}, family));
}

TEST_CASE("sort uniqueness over corpus types") {
    std::size_t count = 0;
    for (const auto& file : testing::corpus("pos")) {
        auto prog = testing::load(file);
        std::vector<Term> candidates;
        for (const auto& d : prog.source.defs) {
            closed_subterms(d.type, candidates);
            closed_subterms(d.body, candidates);
        }
        if (prog.source.main) closed_subterms(prog.source.main->body, candidates);
        for (const Term& a : candidates) {
            Sort s;
            try {
                s = sort_of({}, a);
            } catch (const KernelError&) {
                continue;
            }
            ++count;
            CAPTURE(pretty(a));
            CHECK(sort_of({}, a) == s);
            Sort other = s == Sort::U ? Sort::L : Sort::U;
            LogicalChecker lc;
            TypingContext ctx;
            CHECK_THROWS_AS(lc.check(ctx, a, mk::sort(other)), KernelError);
        }
    }
    CHECK(count >= 50);
    MESSAGE("types checked: " << count);
}

}  // TEST_SUITE

TEST_SUITE("program") {

TEST_CASE("fork example") {
    Term m = parse_term("fork (x : ch<!(b : bool). end>) with (let x <= send x true in close x)");
    auto r = check_program({}, {}, {}, m);
    CHECK(alpha_eq(r.type, parse_term("C(hc<!(b : bool). end>)")));
    CHECK(r.usage.used_linear.empty());
    CHECK(r.usage.used_channels.empty());
}

TEST_CASE("linear errors") {
    LogicalContext g{{"c", mk::ch(mk::end())}};
    ProgramContext d{{"c", mk::ch(mk::end()), Sort::L}};
    CHECK(code_of([&] { check_program({}, g, d, mk::pair_exp(mk::var(0), mk::var(0), Sort::L)); }) ==
          ErrorCode::LinearReused);
    CHECK(code_of([&] { check_program({}, g, d, mk::lam_exp(Sort::U, "y", mk::bool_t(), mk::var(1))); }) ==
          ErrorCode::CaptureViolation);
    CHECK(code_of([&] { check_program({}, g, d, mk::ret(mk::unit_val())); }) == ErrorCode::LinearUnused);
    auto ok = check_program({}, g, d, mk::close(mk::var(0)));
    CHECK(alpha_eq(ok.type, mk::c_type(mk::unit())));
    CHECK(ok.usage.used_linear == std::set<std::string>{"c"});
}

TEST_CASE("channel context") {
    ChannelContext theta{{3, mk::hc(mk::end())}};
    auto r = check_program(theta, {}, {}, mk::wait(mk::chan(3)));
    CHECK(r.usage.used_channels == std::set<ChannelId>{3});
    CHECK(code_of([&] { check_program(theta, {}, {}, mk::ret(mk::unit_val())); }) == ErrorCode::ChannelUnused);
    CHECK(code_of([&] { check_program(theta, {}, {}, mk::close(mk::chan(3))); }) == ErrorCode::TypeMismatch);
}

TEST_CASE("main examples") {
    CHECK_NOTHROW(check_closed_main(mk::ret(mk::unit_val())));
    CHECK(code_of([] { check_closed_main(mk::ret(mk::true_v())); }) == ErrorCode::NotMainType);
    CHECK_NOTHROW(check_closed_main(ping_main()));
}

TEST_CASE("lifting") {
    Term id = mk::lam_imp(Sort::U, "A", mk::sort(Sort::U), mk::lam_exp(Sort::U, "x", mk::var(0), mk::var(0)));
    CHECK(alpha_eq(lift_to_logical({}, {}, {}, id), infer_logical({}, id)));
    CHECK(alpha_eq(lift_to_logical({}, {}, {}, mk::ret(mk::unit_val())), mk::c_type(mk::unit())));
    CHECK(alpha_eq(lift_to_logical({}, {}, {}, ping_main()), mk::c_type(mk::unit())));
}

TEST_CASE("positive corpus checks") {
    auto files = testing::corpus("pos");
    CHECK(files.size() >= 25);
    for (const auto& file : files) {
        CAPTURE(file.filename().string());
        CHECK_NOTHROW(testing::load(file));
    }
}

TEST_CASE("negative corpus fails with the expected code") {
    auto files = testing::corpus("neg");
    CHECK(files.size() >= 15);
    for (const auto& file : files) {
        CAPTURE(file.filename().string());
        std::string want = testing::expected_code(file);
        REQUIRE_FALSE(want.empty());
        std::string got = "ok";
        try {
            testing::load(file);
        } catch (const KernelError& e) {
            got = std::string(to_string(e.code()));
        }
        CHECK(got == want);
    }
}

TEST_CASE("subject reduction along evaluation") {
    for (const auto& file : testing::corpus("pos")) {
        CAPTURE(file.filename().string());
        auto prog = testing::load(file);
        REQUIRE(prog.main);
        Term m = prog.main;
        Term ty = check_program({}, {}, {}, m).type;
        std::size_t steps = 0;
        for (; steps < 500; ++steps) {
            auto r = cbv_step(m);
            if (r.kind != StepKind::Stepped) {
                CHECK(r.kind == StepKind::Value);
                break;
            }
            m = r.term;
            CAPTURE(pretty(m));
            Term now;
            CHECK_NOTHROW(now = check_program({}, {}, {}, m).type);
            if (now) CHECK(convertible(now, ty, default_fuel));
        }
        CHECK(steps < 500);
        auto v = eval_to_value(prog.main, 500);
        CHECK(v.steps == steps);
        CHECK(alpha_eq(v.value, m));
    }
}

TEST_CASE("parallel reduction preserves types of corpus mains") {
    for (const auto& file : testing::corpus("pos")) {
        CAPTURE(file.filename().string());
        auto prog = testing::load(file);
        Term dev = complete_development(prog.main);
        Term now;
        CHECK_NOTHROW(now = check_program({}, {}, {}, dev).type);
        if (now) CHECK(convertible(now, mk::c_type(mk::unit()), default_fuel));
    }
}

TEST_CASE("linearity agrees with a declarative split oracle") {
    FragGen gen(31, 40);
    std::size_t accepted = 0, total = 0;
    for (int i = 0; i < 1500; ++i) {
        std::vector<int> scope{0, 1};
        gen.fresh_ = 2;
        auto f = gen.gen(2 + i % 3, scope, {0, 1});
        std::string src = "fn^L (c0 : hc<end>) => fn^L (c1 : hc<end>) => " + text(*f);
        CAPTURE(src);
        bool want = declarative(*f, bit(0) | bit(1));
        bool got = true;
        Term m = parse_term(src);
        try {
            check_program({}, {}, {}, m);
        } catch (const KernelError& e) {
            got = false;
            CAPTURE(e.what());
            bool linear = e.code() == ErrorCode::LinearReused || e.code() == ErrorCode::LinearUnused ||
                          e.code() == ErrorCode::CaptureViolation;
            CHECK(linear);
        }
        CHECK(got == want);
        accepted += got;
        ++total;
    }
    MESSAGE("oracle terms: " << total << ", accepted: " << accepted);
    CHECK(accepted > total / 5);
    CHECK(accepted < total * 4 / 5);
}

}  // TEST_SUITE
