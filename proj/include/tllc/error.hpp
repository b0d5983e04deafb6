#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tllc {

struct Node;

enum class ErrorCode {
    TypeMismatch,
    UnboundVariable,
    UnboundChannel,
    NotAFunction,
    NotAPair,
    NotABool,
    NotAMonad,
    NotAChannel,
    NotASort,
    ArityViolation,
    GuardViolation,
    FuelExhausted,
    SigSortViolation,
    DuplicateName,
    LinearUnused,
    LinearReused,
    ChannelUnused,
    ChannelReused,
    CaptureViolation,
    DependentBind,
    NotMainType,
    LiftingMismatch,
    OverlappingLinear,
    MismatchedUnrestricted,
    GhostUsage,
    HoleInspected,
    NotAThunk,
    StepBudgetExceeded,
    OrphanChannel,
    SharedChannel,
    ScopeCapture,
    FidelityViolation,
    InternalInvariantViolation,
    ProgressViolation,
    SimulationGap,
    SimulationMismatch,
    TranscriptMismatch,
    Syntax,
};

std::string_view to_string(ErrorCode code);

class KernelError : public std::runtime_error {
public:
    KernelError(ErrorCode code, std::string message, const Node* where = nullptr);

    ErrorCode code() const noexcept { return code_; }
    const Node* where() const noexcept { return where_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    const Node* where_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, std::string message, const Node* where = nullptr);

}  // namespace tllc
