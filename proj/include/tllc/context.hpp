#pragma once

#include <map>
#include <string>
#include <vector>

#include "tllc/term.hpp"

namespace tllc {

// One binder in scope during checking. `relevant` marks entries of the
// program context; ghost binders live only in the logical context.
struct Binding {
    std::string name;
    Term type;
    bool relevant = false;
    Sort sort = Sort::U;
};

using ChannelTypes = std::map<ChannelId, Term>;

class TypingContext {
public:
    std::size_t size() const noexcept { return entries_.size(); }
    bool contains_index(std::uint32_t i) const noexcept { return i < entries_.size(); }
    const Binding& at_index(std::uint32_t i) const { return entries_[entries_.size() - 1 - i]; }
    const Binding& at_level(std::size_t level) const { return entries_[level]; }
    std::size_t level_of(std::uint32_t i) const noexcept { return entries_.size() - 1 - i; }
    // Type of index i, lifted into the current context.
    Term type_of(std::uint32_t i) const { return shift(at_index(i).type, static_cast<std::int64_t>(i) + 1); }

    void push(Binding b) { entries_.push_back(std::move(b)); }
    void pop() { entries_.pop_back(); }
    std::vector<std::string> names() const;

private:
    std::vector<Binding> entries_;
};

class ScopedBinding {
public:
    ScopedBinding(TypingContext& ctx, Binding b) : ctx_(ctx) { ctx_.push(std::move(b)); }
    ~ScopedBinding() { ctx_.pop(); }
    ScopedBinding(const ScopedBinding&) = delete;
    ScopedBinding& operator=(const ScopedBinding&) = delete;

private:
    TypingContext& ctx_;
};

}  // namespace tllc
