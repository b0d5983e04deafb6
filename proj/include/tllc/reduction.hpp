#pragma once

#include <cstddef>
#include <vector>

#include "tllc/term.hpp"

namespace tllc {

inline constexpr std::size_t default_fuel = 1024;

// Budget for head reductions; running out is an error, never a loop.
class Fuel {
public:
    explicit Fuel(std::size_t budget = default_fuel) : left_(budget) {}
    void spend(const Node* at);
    std::size_t remaining() const noexcept { return left_; }

private:
    std::size_t left_;
};

// All one-step parallel reducts of t, t itself included, without duplicates.
std::vector<Term> parallel_reducts(const Term& t);

// Contracts every visible redex at once.
Term complete_development(const Term& t);

Term whnf(const Term& t, Fuel& fuel);
Term whnf(const Term& t, std::size_t budget);

bool convertible(const Term& a, const Term& b, Fuel& fuel);
bool convertible(const Term& a, const Term& b, std::size_t budget);

}  // namespace tllc
