#include "tllc/values.hpp"

namespace tllc {

bool is_type_former(Kind k) noexcept {
    switch (k) {
    case Kind::SortT:
    case Kind::PiExp:
    case Kind::PiImp:
    case Kind::SigExp:
    case Kind::SigImp:
    case Kind::Unit:
    case Kind::Bool:
    case Kind::CType:
    case Kind::Proto:
    case Kind::End:
    case Kind::ActExp:
    case Kind::ActImp:
    case Kind::Fix:
    case Kind::ChT:
    case Kind::HcT:
        return true;
    default:
        return false;
    }
}

bool is_thunk(const Term& t) {
    switch (t.kind()) {
    case Kind::Fork:
        return true;
    case Kind::RecvOp:
    case Kind::RecvGhostOp:
    case Kind::CloseOp:
    case Kind::WaitOp:
        return is_value(t.kid(0));
    case Kind::AppExp:
        return t.kid(0).kind() == Kind::SendOp && is_value(t.kid(0).kid(0)) && is_value(t.kid(1));
    case Kind::AppImp:
        return t.kid(0).kind() == Kind::SendGhostOp && is_value(t.kid(0).kid(0));
    case Kind::Bind:
        return is_thunk(t.kid(0));
    default:
        return false;
    }
}

bool is_value(const Term& t) {
    Kind k = t.kind();
    if (is_type_former(k)) return true;
    switch (k) {
    case Kind::LamExp:
    case Kind::LamImp:
    case Kind::UnitVal:
    case Kind::TrueV:
    case Kind::FalseV:
    case Kind::ChanLit:
    case Kind::Hole:
    case Kind::Fork:
        return true;
    case Kind::PairExp:
        return is_value(t.kid(0)) && is_value(t.kid(1));
    case Kind::PairImp:
        return is_value(t.kid(1));
    case Kind::Return:
    case Kind::SendOp:
    case Kind::SendGhostOp:
        return is_value(t.kid(0));
    default:
        return is_thunk(t);
    }
}

}  // namespace tllc
