#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "tllc/cli.hpp"
#include "tllc/error.hpp"
#include "tllc/parse.hpp"
#include "tllc/print.hpp"

using namespace tllc;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tllc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string path(const std::string& rel) { return (testing::corpus_dir() / rel).string(); }

void each_subterm(const Term& t, const std::function<void(const Term&)>& f) {
    f(t);
    for (std::size_t i = 0; i < t.arity(); ++i) each_subterm(t.kid(i), f);
}

}  // namespace

TEST_SUITE("frontend") {

TEST_CASE("parse examples") {
    auto src = parse_source("main : C(unit) := return ()");
    REQUIRE(src.main);
    CHECK(alpha_eq(src.main->body, mk::ret(mk::unit_val())));
    CHECK(alpha_eq(parse_term("!(b : bool). end"), mk::act_exp(Polarity::Send, "b", mk::bool_t(), mk::end())));
    Term t = mk::fix("X", mk::proto(), mk::act_exp(Polarity::Recv, "_", mk::var(0), mk::var(1)));
    CHECK(alpha_eq(parse_term("fix (X : proto). ?(_ : X). X"), t));
    CHECK(alpha_eq(parse_term("?{n : bool}. end"), mk::act_imp(Polarity::Recv, "n", mk::bool_t(), mk::end())));
    CHECK(alpha_eq(parse_term("send~ #0 {true}"), mk::app_imp(mk::send_ghost(mk::chan(0)), mk::true_v())));
    CHECK(alpha_eq(parse_term("<{true}, #2>^L"), mk::pair_imp(mk::true_v(), mk::chan(2), Sort::L)));
    CHECK(alpha_eq(parse_term("□"), mk::hole()));
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_source("main : C(unit) :=\n  return (");
        FAIL("expected a syntax error");
    } catch (const SourceError& e) {
        CHECK(e.code() == ErrorCode::Syntax);
        CHECK(e.pos().line == 2);
    }
    try {
        parse_term("fn^U (x : bool) => y");
        FAIL("expected an unbound variable");
    } catch (const SourceError& e) {
        CHECK(e.code() == ErrorCode::UnboundVariable);
        CHECK(e.pos().col == 20);
    }
    CHECK_THROWS_AS(parse_source("def a : unit := ()\ndef a : unit := ()\nmain : C(unit) := return ()"), SourceError);
}

TEST_CASE("printing round trips through the parser") {
    std::size_t count = 0;
    for (const auto& file : testing::corpus("pos")) {
        CAPTURE(file.filename().string());
        auto src = parse_source(testing::read_file(file));
        std::vector<Term> terms;
        for (const auto& d : src.defs) {
            terms.push_back(d.type);
            terms.push_back(d.body);
        }
        if (src.main) terms.push_back(src.main->body);
        auto prog = testing::load(file);
        terms.push_back(prog.main);
        for (const Term& t : terms) {
            each_subterm(t, [&](const Term& u) {
                if (!is_closed(u)) return;
                std::string text = pretty(u);
                CAPTURE(text);
                Term back;
                CHECK_NOTHROW(back = parse_term(text));
                if (back) CHECK(alpha_eq(back, u));
                ++count;
            });
        }
    }
    CHECK(count > 500);
}

TEST_CASE("generated terms round trip") {
    testing::TermGen gen(61);
    for (int i = 0; i < 500; ++i) {
        Term t = gen.term(4, 0);
        std::string text = pretty(t);
        CAPTURE(text);
        Term back;
        CHECK_NOTHROW(back = parse_term(text));
        if (back) CHECK(alpha_eq(back, t));
    }
}

TEST_CASE("diagnostics") {
    auto text = testing::read_file(testing::corpus_dir() / "neg" / "reuse.tll");
    auto src = parse_source(text);
    try {
        check_source(src);
        FAIL("expected LinearReused");
    } catch (const KernelError& e) {
        std::string d = format_diagnostic(e, src.spans);
        CHECK(d.rfind("LinearReused:", 0) == 0);
    }
}

TEST_CASE("command line") {
    CHECK(cli({"check", path("pos/ping.tll")}).code == 0);
    auto run = cli({"run", path("pos/ping.tll"), "--seed", "7", "--recheck"});
    CHECK(run.code == 0);
    CHECK(run.out.find("result=done") != std::string::npos);
    CHECK(run.out.find("rule=Fork") != std::string::npos);

    auto reuse = cli({"check", path("neg/reuse.tll")});
    CHECK(reuse.code == 1);
    CHECK(reuse.err.find("LinearReused") != std::string::npos);

    auto dl = cli({"deadlock", path("config/crossed_recv.tll")});
    CHECK(dl.code == 2);
    CHECK(dl.out.find("result=deadlock") != std::string::npos);

    CHECK(cli({"run", path("pos/multi_round.tll"), "--max-steps", "1"}).code == 3);
    CHECK(cli({"erase", path("pos/ghost_send.tll")}).code == 0);
    CHECK(cli({"simulate", path("pos/ping.tll"), "--seed", "2"}).code == 0);
    CHECK(cli({"tree-run", path("pos/ping.tll"), "--seed", "2"}).code == 0);
    CHECK(cli({"check", path("does/not/exist.tll")}).code == 64);
    CHECK(cli({"frobnicate"}).code == 64);
    CHECK(cli({"check", path("recursive/t_client.tll")}).code == 1);
}

TEST_CASE("exit codes") {
    CHECK(exit_code(ErrorCode::TypeMismatch) == 1);
    CHECK(exit_code(ErrorCode::Syntax) == 1);
    CHECK(exit_code(ErrorCode::StepBudgetExceeded) == 3);
    CHECK(exit_code(ErrorCode::FuelExhausted) == 3);
    CHECK(exit_code(ErrorCode::SimulationGap) == 4);
    CHECK(exit_code(ErrorCode::HoleInspected) == 4);
}

}  // TEST_SUITE
