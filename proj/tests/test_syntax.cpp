#include <doctest.h>

#include "support.hpp"
#include "tllc/print.hpp"
#include "tllc/values.hpp"

using namespace tllc;

namespace {

Term recursive_t() { return mk::fix("X", mk::proto(), mk::act_exp(Polarity::Recv, "_", mk::var(0), mk::var(1))); }

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("substitution examples") {
    // Free variables are indices; under an empty context index 0 is x.
    CHECK(alpha_eq(substitute(mk::var(0, "x"), 0, mk::unit_val()), mk::unit_val()));

    Term t = recursive_t();
    Term body = t.kid(1);
    Term unfolded = instantiate(body, t);
    Term expected = mk::act_exp(Polarity::Recv, "_", t, shift(t, 1));
    CHECK(alpha_eq(unfolded, expected));

    Term id = mk::lam_exp(Sort::U, "x", mk::bool_t(), mk::var(0));
    CHECK(alpha_eq(substitute(id, 0, mk::true_v()), id));
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_eq(mk::lam_exp(Sort::U, "x", mk::bool_t(), mk::var(0, "x")),
                   mk::lam_exp(Sort::U, "y", mk::bool_t(), mk::var(0, "y"))));
    CHECK_FALSE(alpha_eq(mk::var(0, "x"), mk::var(1, "y")));
    Term t1 = recursive_t();
    Term t2 = mk::fix("Y", mk::proto(), mk::act_exp(Polarity::Recv, "z", mk::var(0, "Y"), mk::var(1, "Y")));
    CHECK(alpha_eq(t1, t2));
    CHECK(compare(t1, t2) == 0);
    CHECK(t1.hash() == t2.hash());
}

TEST_CASE("free variables and channels") {
    CHECK(free_vars(mk::var(0, "x")) == std::set<std::string>{"x"});
    CHECK(free_vars(mk::lam_exp(Sort::U, "x", mk::bool_t(), mk::var(0, "x"))).empty());
    Term m = mk::bind(mk::var(0, "m"), "x", mk::app_exp(mk::var(2, "f"), mk::var(0, "x")));
    CHECK(free_vars(m) == std::set<std::string>{"m", "f"});

    CHECK(free_channels(mk::chan(3)) == std::set<ChannelId>{3});
    CHECK(free_channels(mk::unit_val()).empty());
    CHECK(free_channels(mk::pair_exp(mk::chan(1), mk::chan(2), Sort::L)) == std::set<ChannelId>{1, 2});
}

TEST_CASE("values and thunks") {
    CHECK(is_value(mk::ret(mk::unit_val())));
    CHECK(is_thunk(mk::close(mk::chan(0))));
    CHECK_FALSE(is_value(mk::app_exp(mk::lam_exp(Sort::U, "x", mk::bool_t(), mk::var(0)), mk::true_v())));
    CHECK(is_value(mk::close(mk::chan(0))));
    CHECK(is_thunk(mk::bind(mk::recv(mk::chan(1)), "x", mk::ret(mk::var(0)))));
}

TEST_CASE("shift round trips") {
    testing::TermGen gen(11);
    for (int i = 0; i < 500; ++i) {
        Term t = gen.term(4, 3);
        CAPTURE(pretty(t, {"a", "b", "c"}));
        CHECK(alpha_eq(shift(shift(t, 2, 1), -2, 1), t));
        CHECK(alpha_eq(shift(shift(t, 1), 1), shift(t, 2)));
        CHECK(alpha_eq(shift(t, 0), t));
    }
}

TEST_CASE("instantiating a weakened term is the identity") {
    testing::TermGen gen(12);
    for (int i = 0; i < 500; ++i) {
        Term t = gen.term(4, 2);
        Term v = gen.term(2, 2);
        CHECK(alpha_eq(instantiate(shift(t, 1), v), t));
    }
}

TEST_CASE("instantiate2 agrees with two single instantiations") {
    testing::TermGen gen(13);
    for (int i = 0; i < 500; ++i) {
        Term t = gen.term(4, 4);
        Term a = gen.term(2, 2);
        Term b = gen.term(2, 2);
        CHECK(alpha_eq(instantiate2(t, a, b), instantiate(instantiate(t, shift(b, 1)), a)));
    }
}

TEST_CASE("substitutions commute") {
    testing::TermGen gen(14);
    for (int i = 0; i < 500; ++i) {
        Term t = gen.term(4, 3);  // under x (0) and y (1)
        Term u = gen.term(3, 2);  // under y
        Term v = gen.term(2, 1);
        Term lhs = instantiate(instantiate(t, u), v);
        Term rhs = instantiate(substitute(t, 1, v), instantiate(u, v));
        CHECK(alpha_eq(lhs, rhs));
    }
}

TEST_CASE("closed scope bookkeeping") {
    testing::TermGen gen(15);
    for (int i = 0; i < 300; ++i) {
        Term t = gen.term(4, 0);
        CHECK(is_closed(t));
        CHECK(free_indices(t).empty());
        CHECK(alpha_eq(shift(t, 5), t));
    }
}

}  // TEST_SUITE
