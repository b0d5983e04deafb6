#include <doctest.h>

#include "tllc/error.hpp"
#include "tllc/judgments.hpp"

using namespace tllc;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const KernelError& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Syntax;
}

}  // namespace

TEST_SUITE("judgments") {

TEST_CASE("sort order") {
    CHECK(sort_leq(Sort::U, Sort::L));
    CHECK_FALSE(sort_leq(Sort::L, Sort::U));
    CHECK(sort_leq(Sort::L, Sort::L));
    CHECK(sort_leq(Sort::U, Sort::U));
}

TEST_CASE("context merge") {
    ProgramContext xu{{"x", mk::bool_t(), Sort::U}};
    auto m = ctx_merge(xu, xu);
    REQUIRE(m.size() == 1);
    CHECK(m[0].name == "x");
    CHECK(m[0].sort == Sort::U);

    ProgramContext cl{{"c", mk::ch(mk::end()), Sort::L}};
    CHECK(code_of([&] { ctx_merge(cl, cl); }) == ErrorCode::OverlappingLinear);
    CHECK(ctx_merge(ProgramContext{}, ProgramContext{}).empty());
    CHECK(ctx_merge(xu, ProgramContext{}).size() == 1);

    ProgramContext xl{{"x", mk::bool_t(), Sort::L}};
    CHECK(code_of([&] { ctx_merge(xu, xl); }) == ErrorCode::MismatchedUnrestricted);

    ChannelContext a{{0, mk::ch(mk::end())}};
    ChannelContext b{{1, mk::hc(mk::end())}};
    CHECK(ctx_merge(a, b).size() == 2);
    CHECK(code_of([&] { ctx_merge(a, a); }) == ErrorCode::OverlappingLinear);
}

TEST_CASE("restriction") {
    ProgramContext xu{{"x", mk::bool_t(), Sort::U}};
    ProgramContext cl{{"c", mk::ch(mk::end()), Sort::L}};
    CHECK(restrict_ok(xu, Sort::U));
    CHECK_FALSE(restrict_ok(cl, Sort::U));
    CHECK(restrict_ok(xu, Sort::L));
    CHECK(restrict_ok(cl, Sort::L));
    CHECK(restrict_ok(ProgramContext{}, Sort::U));
    CHECK_FALSE(restrict_ok(ChannelContext{{0, mk::ch(mk::end())}}, Sort::U));
    CHECK(restrict_ok(ChannelContext{{0, mk::ch(mk::end())}}, Sort::L));
}

TEST_CASE("arity") {
    CHECK(is_arity(mk::proto(), mk::proto()));
    CHECK(is_arity(mk::pi_exp(Sort::U, "n", mk::bool_t(), mk::proto()), mk::proto()));
    CHECK(is_arity(mk::pi_imp(Sort::U, "n", mk::bool_t(), mk::pi_exp(Sort::U, "m", mk::unit(), mk::proto())),
                   mk::proto()));
    CHECK_FALSE(is_arity(mk::bool_t(), mk::proto()));
    CHECK_FALSE(is_arity(mk::pi_exp(Sort::U, "n", mk::bool_t(), mk::bool_t()), mk::proto()));
}

TEST_CASE("guardedness") {
    CHECK_FALSE(is_guarded(mk::var(0), 0));
    CHECK(is_guarded(mk::var(1), 0));
    CHECK(is_guarded(mk::act_exp(Polarity::Recv, "_", mk::unit(), mk::var(1)), 0));
    CHECK_FALSE(is_guarded(mk::act_exp(Polarity::Recv, "_", mk::var(0), mk::end()), 0));
    CHECK(is_guarded(mk::end(), 0));
    CHECK(is_guarded(mk::act_imp(Polarity::Send, "_", mk::bool_t(), mk::var(1)), 0));
}

}  // TEST_SUITE
