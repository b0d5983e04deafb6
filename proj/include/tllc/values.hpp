#pragma once

#include "tllc/term.hpp"

namespace tllc {

bool is_value(const Term& t);

// Suspended communication: fork, recv, close, wait, a saturated send, or a
// bind whose bound part is itself a thunk.
bool is_thunk(const Term& t);

// Type formers, sorts and protocols.
bool is_type_former(Kind k) noexcept;

}  // namespace tllc
