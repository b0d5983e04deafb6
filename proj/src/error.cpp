#include "tllc/error.hpp"

namespace tllc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::UnboundChannel: return "UnboundChannel";
    case ErrorCode::NotAFunction: return "NotAFunction";
    case ErrorCode::NotAPair: return "NotAPair";
    case ErrorCode::NotABool: return "NotABool";
    case ErrorCode::NotAMonad: return "NotAMonad";
    case ErrorCode::NotAChannel: return "NotAChannel";
    case ErrorCode::NotASort: return "NotASort";
    case ErrorCode::ArityViolation: return "ArityViolation";
    case ErrorCode::GuardViolation: return "GuardViolation";
    case ErrorCode::FuelExhausted: return "FuelExhausted";
    case ErrorCode::SigSortViolation: return "SigSortViolation";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::LinearUnused: return "LinearUnused";
    case ErrorCode::LinearReused: return "LinearReused";
    case ErrorCode::ChannelUnused: return "ChannelUnused";
    case ErrorCode::ChannelReused: return "ChannelReused";
    case ErrorCode::CaptureViolation: return "CaptureViolation";
    case ErrorCode::DependentBind: return "DependentBind";
    case ErrorCode::NotMainType: return "NotMainType";
    case ErrorCode::LiftingMismatch: return "LiftingMismatch";
    case ErrorCode::OverlappingLinear: return "OverlappingLinear";
    case ErrorCode::MismatchedUnrestricted: return "MismatchedUnrestricted";
    case ErrorCode::GhostUsage: return "GhostUsage";
    case ErrorCode::HoleInspected: return "HoleInspected";
    case ErrorCode::NotAThunk: return "NotAThunk";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::OrphanChannel: return "OrphanChannel";
    case ErrorCode::SharedChannel: return "SharedChannel";
    case ErrorCode::ScopeCapture: return "ScopeCapture";
    case ErrorCode::FidelityViolation: return "FidelityViolation";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::ProgressViolation: return "ProgressViolation";
    case ErrorCode::SimulationGap: return "SimulationGap";
    case ErrorCode::SimulationMismatch: return "SimulationMismatch";
    case ErrorCode::TranscriptMismatch: return "TranscriptMismatch";
    case ErrorCode::Syntax: return "Syntax";
    }
    return "Unknown";
}

KernelError::KernelError(ErrorCode code, std::string message, const Node* where)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      where_(where),
      detail_(std::move(message)) {}

void fail(ErrorCode code, std::string message, const Node* where) {
    throw KernelError(code, std::move(message), where);
}

}  // namespace tllc
