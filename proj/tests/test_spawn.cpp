#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tllc/error.hpp"
#include "tllc/spawn_tree.hpp"

using namespace tllc;

namespace {

Term ping() { return testing::load(testing::corpus_dir() / "pos" / "ping.tll").main; }

}  // namespace

TEST_SUITE("spawn") {

TEST_CASE("trivial root") {
    SpawnTree t = root_tree(mk::ret(mk::unit_val()));
    Configuration c = flatten(t);
    CHECK(c.procs.empty());
    CHECK(c.scopes.empty());
    CHECK(is_terminal(t));
    CHECK_NOTHROW(validate(t));
    ChannelId next = 0;
    std::mt19937_64 rng(1);
    CHECK(tree_step(t, next, rng).status == TreeStatus::Terminal);
}

TEST_CASE("fork at the root") {
    SpawnTree t = root_tree(ping());
    ChannelId next = 0;
    std::mt19937_64 rng(1);
    TreeStep s = tree_step(t, next, rng);
    CHECK(s.tree_rule == "Root-Fork");
    REQUIRE(t.children.size() == 1);
    CHECK_FALSE(t.children[0].root);
    CHECK(t.children[0].own_is_ch);
    CHECK_NOTHROW(validate(t));
    Configuration c = flatten(t, next);
    CHECK(c.procs.size() == 2);
    CHECK(c.scopes.size() == 1);
    CHECK_NOTHROW(type_configuration(c));

    // The same child seen from the other end of its channel is ill-typed.
    SpawnTree flipped = t;
    flipped.children[0].own_is_ch = false;
    CHECK_THROWS_AS(validate(flipped), KernelError);
}

TEST_CASE("ping tree run") {
    TreeRunOptions opts;
    opts.seed = 3;
    auto r = tree_run(ping(), opts);
    CHECK(r.outcome == Outcome::Done);
    CHECK(r.steps.size() <= 12);
    CHECK(is_terminal(r.final_tree));
    std::set<std::string> rules;
    for (const auto& s : r.steps) rules.insert(s.tree_rule);
    CHECK(rules.count("Root-Fork"));
    CHECK(rules.count("Root-Recv"));
    CHECK(rules.count("Root-Wait"));
    CHECK(format_tree_trace(r).find("tree-rule=Root-Fork") != std::string::npos);
}

TEST_CASE("corpus tree runs reach a terminal tree") {
    std::set<std::string> rules;
    for (const auto& file : testing::corpus("pos")) {
        CAPTURE(file.filename().string());
        auto prog = testing::load(file);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            TreeRunOptions opts;
            opts.seed = seed;
            opts.max_steps = 5000;
            bool acyclic = true;
            opts.observe = [&](const Configuration& c) { acyclic = acyclic && ownership_acyclic(c); };
            TreeRunResult r;
            CHECK_NOTHROW(r = tree_run(prog.main, opts));
            CHECK(r.outcome == Outcome::Done);
            CHECK(acyclic);
            CHECK(is_terminal(r.final_tree));
            CHECK(flatten(r.final_tree).procs.empty());
            for (const auto& s : r.steps) rules.insert(s.tree_rule);
        }
    }
    for (const char* name : {"Root-Fork", "Root-Expr", "Root-Wait", "Root-Close", "Root-Send", "Root-Recv",
                             "Root-SendGhost", "Root-RecvGhost", "Node-Fork", "Node-Expr", "Node-Wait", "Node-Close",
                             "Node-Send", "Node-Recv", "Node-SendGhost", "Node-RecvGhost", "Node-Forward"}) {
        CAPTURE(name);
        CHECK(rules.count(name));
    }
}

TEST_CASE("forwarding the parent channel") {
    auto prog = testing::load(testing::corpus_dir() / "pos" / "forward_parent.tll");
    TreeRunOptions opts;
    opts.seed = 1;
    auto r = tree_run(prog.main, opts);
    bool forwarded = false;
    for (const auto& s : r.steps) forwarded = forwarded || s.tree_rule == "Node-Forward";
    CHECK(forwarded);
}

TEST_CASE("reachability certificates") {
    Configuration crossed = testing::load(testing::corpus_dir() / "config" / "crossed_recv.tll").config;
    for (const auto& file : testing::corpus("pos")) {
        CAPTURE(file.filename().string());
        auto prog = testing::load(file);
        CHECK_FALSE(certify_reachable(crossed, prog.main, 5000));
    }
    Term m = ping();
    CHECK(certify_reachable(singleton(m), m, 100));
    Configuration c = singleton(m);
    c = apply_redex(c, enabled_redexes(c)[0]);
    CHECK(certify_reachable(c, m, 100));
}

}  // TEST_SUITE
