#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tllc/process.hpp"

namespace tllc {

// A root when `root` is set; otherwise a node linked to its parent by the
// edge (parent_end, own_end) whose live protocol is `protocol`.
struct SpawnTree {
    Term term;
    bool root = true;
    ChannelId parent_end = 0;
    ChannelId own_end = 0;
    bool own_is_ch = false;
    Term protocol;
    std::vector<SpawnTree> children;
    std::vector<SpawnTree> detached;
};

SpawnTree root_tree(const Term& main);

// The configuration a tree stands for. Every edge becomes a scope.
Configuration flatten(const SpawnTree& t, ChannelId next_channel = 0);

// Typing of every node against the edges around it. Errors name the path to
// the offending node.
void validate(const SpawnTree& t, std::size_t fuel = default_fuel);

bool is_terminal(const SpawnTree& t);

enum class TreeStatus { Stepped, Terminal, Poised };

struct TreeStep {
    TreeStatus status = TreeStatus::Stepped;
    std::string tree_rule;  // e.g. Root-Fork, Node-Forward
    StepInfo info;
};

// One step of the progress scheduler. Throws ProgressViolation when no rule
// applies to a tree that is neither terminal nor poised.
TreeStep tree_step(SpawnTree& t, ChannelId& next_channel, std::mt19937_64& rng, std::size_t fuel = default_fuel);

struct TreeRunOptions {
    std::uint64_t seed = 0;
    std::size_t max_steps = 10000;
    std::size_t fuel = default_fuel;
    bool check = true;  // validate and cross-check against the process semantics after each step
    std::function<void(const Configuration&)> observe;  // sees every flattened state, the initial one included
};

struct TreeRunResult {
    Outcome outcome = Outcome::Done;
    std::vector<TreeStep> steps;
    SpawnTree final_tree;
};

// Throws ProgressViolation, SimulationGap, FidelityViolation.
TreeRunResult tree_run(const Term& main, const TreeRunOptions& opts);

std::string format_tree_trace(const TreeRunResult& r);

// True when c is congruent to some flattened state on main's tree run.
bool certify_reachable(const Configuration& c, const Term& main, std::size_t max_steps, std::uint64_t seed = 0,
                       std::size_t fuel = default_fuel);

}  // namespace tllc
