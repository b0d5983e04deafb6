#pragma once

#include <string>
#include <vector>

#include "tllc/term.hpp"

namespace tllc {

// Concrete syntax with minimal parentheses. `names` binds the free indices:
// names.back() is index 0.
std::string pretty(const Term& t, const std::vector<std::string>& names = {});

bool is_keyword(const std::string& word);

}  // namespace tllc
