#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tllc/error.hpp"
#include "tllc/process.hpp"
#include "tllc/term.hpp"

namespace tllc {

struct SourcePos {
    std::size_t line = 0;
    std::size_t col = 0;
};

// Where each parsed node started.
using SpanTable = std::unordered_map<const Node*, SourcePos>;

// A diagnostic raised with a source position already known.
class SourceError : public KernelError {
public:
    SourceError(ErrorCode code, std::string message, SourcePos pos)
        : KernelError(code, std::move(message)), pos_(pos) {}
    SourcePos pos() const noexcept { return pos_; }

private:
    SourcePos pos_;
};

struct Definition {
    std::string name;
    Term type;
    Term body;
    SourcePos pos;
};

struct ScopeItem {
    ChannelId ch_end;
    ChannelId hc_end;
    Term protocol;
    SourcePos pos;
};

struct SourceFile {
    std::vector<Definition> defs;
    std::optional<Definition> main;
    std::vector<ScopeItem> scopes;
    std::vector<Term> procs;
    SpanTable spans;

    bool is_config() const { return !main && (!scopes.empty() || !procs.empty()); }
    RawConfig config() const;
};

// Throws SourceError (Syntax, UnboundVariable, DuplicateName).
SourceFile parse_source(const std::string& text);

// A single term in an empty scope, with defs from `defs` visible.
Term parse_term(const std::string& text, const std::vector<Definition>& defs = {});

// `CODE:line:col: message`, positioned through the span table when possible.
std::string format_diagnostic(const KernelError& e, const SpanTable& spans);

}  // namespace tllc
