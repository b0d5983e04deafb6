#include "tllc/erasure.hpp"

#include <algorithm>
#include <random>

#include "tllc/error.hpp"
#include "tllc/print.hpp"
#include "tllc/program.hpp"
#include "tllc/values.hpp"

namespace tllc {

Term erase(const Term& m) {
    if (is_type_former(m.kind())) return mk::hole();
    auto kids = [&](std::initializer_list<int> holes) {
        std::vector<Term> out;
        out.reserve(m.arity());
        for (std::size_t i = 0; i < m.arity(); ++i) {
            bool h = std::find(holes.begin(), holes.end(), static_cast<int>(i)) != holes.end();
            out.push_back(h ? mk::hole() : erase(m.kid(i)));
        }
        return with_kids(m, std::move(out));
    };
    switch (m.kind()) {
    case Kind::AppImp: return kids({1});
    case Kind::PairImp: return kids({0});
    case Kind::LamExp:
    case Kind::LamImp:
    case Kind::Fork:
    case Kind::SigElim:
    case Kind::BoolElim:
        return kids({0});
    default: return kids({});
    }
}

Term erase_term(const ChannelContext& theta, const LogicalContext& gamma, const ProgramContext& delta, const Term& m,
                std::size_t fuel) {
    ProgramResult r = check_program(theta, gamma, delta, m, fuel);
    return erase(r.term);
}

StepResult erased_step(const Term& m) { return detail::step(m, true); }

TermLockstep lockstep_term(const Term& m, std::size_t max_steps) {
    Term orig = m;
    Term erased = erase(m);
    TermLockstep out;
    for (;;) {
        StepResult a = cbv_step(orig);
        StepResult b = erased_step(erased);
        auto mismatch = [&](const std::string& what) {
            fail(ErrorCode::SimulationMismatch, "step " + std::to_string(out.steps) + ": " + what + "\n  original: " +
                                                    pretty(orig) + "\n  erased:   " + pretty(erased));
        };
        if (a.kind != b.kind) mismatch("the two machines disagree on whether a step exists");
        if (a.kind != StepKind::Stepped) {
            if (is_thunk(orig) != is_thunk(erased)) mismatch("thunk shape not preserved");
            out.last = a.kind;
            return out;
        }
        if (out.steps == max_steps)
            fail(ErrorCode::StepBudgetExceeded, "lockstep did not finish in " + std::to_string(max_steps) + " steps");
        ++out.steps;
        orig = std::move(a.term);
        erased = std::move(b.term);
        if (!alpha_eq(erase(orig), erased)) mismatch("erase(step m) differs from step(erase m)");
    }
}

Configuration erase_config(const Configuration& c) {
    Configuration out = c;
    out.erased = true;
    for (Term& p : out.procs) p = erase(p);
    for (Scope& s : out.scopes) s.protocol = mk::hole();
    normalize(out);
    return out;
}

namespace {

std::size_t find_proc(const Configuration& c, const Term& erased_proc) {
    for (std::size_t i = 0; i < c.procs.size(); ++i)
        if (alpha_eq(c.procs[i], erased_proc)) return i;
    fail(ErrorCode::SimulationMismatch, "no erased process matches " + pretty(erased_proc));
}

}  // namespace

ConfigLockstep lockstep_config(const Configuration& c, std::uint64_t seed, std::size_t max_steps, std::size_t fuel) {
    ConfigLockstep out;
    Configuration orig = c;
    Configuration erased = erase_config(c);
    std::mt19937_64 rng(seed);
    for (;;) {
        if (orig.procs.empty()) {
            out.outcome = Outcome::Done;
            break;
        }
        std::vector<Redex> rs = enabled_redexes(orig);
        if (rs.empty()) {
            out.outcome = Outcome::Deadlock;
            break;
        }
        if (out.steps >= max_steps) {
            out.outcome = Outcome::Budget;
            break;
        }
        const Redex r = rs[rng() % rs.size()];

        Redex mirror{r.rule, find_proc(erased, erase(orig.procs[r.proc])), 0};
        mirror.peer = r.peer == r.proc ? mirror.proc : find_proc(erased, erase(orig.procs[r.peer]));
        if (mirror.peer == mirror.proc && r.peer != r.proc)
            fail(ErrorCode::SimulationMismatch, "erased sender and receiver collapsed into one process");
        bool enabled = false;
        for (const Redex& e : enabled_redexes(erased))
            enabled = enabled || (e.rule == mirror.rule && e.proc == mirror.proc && e.peer == mirror.peer);
        if (!enabled)
            fail(ErrorCode::SimulationMismatch, std::string("erased configuration cannot take the ") +
                                                    to_string(r.rule) + " step " + std::to_string(out.steps + 1));

        StepInfo a, b;
        orig = apply_redex(orig, r, fuel, &a);
        erased = apply_redex(erased, mirror, fuel, &b);
        ++out.steps;
        if (a.chans != b.chans)
            fail(ErrorCode::SimulationMismatch, "step " + std::to_string(out.steps) + " used different channels");
        if (a.payload_kind != b.payload_kind)
            fail(ErrorCode::SimulationMismatch, "step " + std::to_string(out.steps) + " moved a different payload kind");
        if (a.payload_kind == PayloadKind::Real) {
            out.transcript.push_back(pretty(erase(a.payload)));
            out.erased_transcript.push_back(b.payload_text);
        } else if (a.payload_kind == PayloadKind::Ghost) {
            ++out.ghost_steps;
        }
        if (!congruent(erase_config(orig), erased))
            fail(ErrorCode::SimulationMismatch,
                 "after step " + std::to_string(out.steps) + " the erased configuration diverged:\n" +
                     format_configuration(erase_config(orig)) + "vs\n" + format_configuration(erased));
    }
    if (out.transcript != out.erased_transcript)
        fail(ErrorCode::TranscriptMismatch, "real-message transcripts differ");
    return out;
}

}  // namespace tllc
