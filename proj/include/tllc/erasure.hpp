#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tllc/eval.hpp"
#include "tllc/judgments.hpp"
#include "tllc/process.hpp"

namespace tllc {

// Syntactic erasure of an already checked term: ghost arguments, ghost pair
// components, binder annotations, motives and stray type formers become Hole.
Term erase(const Term& m);

// Checks m first; typing errors propagate.
Term erase_term(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta, const Term& m,
                std::size_t fuel = default_fuel);

// One step of the machine on an erased term. Throws HoleInspected.
StepResult erased_step(const Term& m);

struct TermLockstep {
    std::size_t steps = 0;
    StepKind last = StepKind::Value;
};

// Steps m and erase(m) side by side and checks erase(step m) == step(erase m)
// at every step. Throws SimulationMismatch.
TermLockstep lockstep_term(const Term& m, std::size_t max_steps);

Configuration erase_config(const Configuration& c);

struct ConfigLockstep {
    std::size_t steps = 0;
    Outcome outcome = Outcome::Done;
    std::vector<std::string> transcript;         // original side, payloads erased
    std::vector<std::string> erased_transcript;  // erased side
    std::size_t ghost_steps = 0;
};

// Runs c under the seeded scheduler and mirrors every redex on erase_config(c).
// Throws SimulationMismatch or TranscriptMismatch.
ConfigLockstep lockstep_config(const Configuration& c, std::uint64_t seed, std::size_t max_steps,
                               std::size_t fuel = default_fuel);

}  // namespace tllc
