#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tllc/term.hpp"

namespace tllc {

enum class StepKind { Stepped, Value, Stuck };

struct StepResult {
    StepKind kind;
    Term term;  // successor when Stepped, the input otherwise
};

StepResult cbv_step(const Term& m);

// One `let x <= [.] in body` frame.
struct EvalFrame {
    std::string binder;
    Term body;
};
// Outermost frame first.
using EvalContext = std::vector<EvalFrame>;

struct Decomposition {
    EvalContext context;
    Term head;  // fork, recv, recv~, close, wait, send c v, send~ c o
};

Decomposition decompose(const Term& m);
Term plug(const EvalContext& ctx, const Term& filler);

struct Evaluated {
    Term value;
    std::size_t steps;
};

// Throws StepBudgetExceeded.
Evaluated eval_to_value(const Term& m, std::size_t max_steps);

namespace detail {
// The machine behind cbv_step; erased mode treats Hole as an opaque value and
// reports HoleInspected when a Hole reaches an elimination.
StepResult step(const Term& m, bool erased);
}  // namespace detail

}  // namespace tllc
