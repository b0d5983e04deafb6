#include "tllc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tllc/erasure.hpp"
#include "tllc/logical.hpp"
#include "tllc/print.hpp"
#include "tllc/program.hpp"
#include "tllc/spawn_tree.hpp"

namespace tllc {

LoadedProgram check_source(const SourceFile& source, std::size_t fuel) {
    LoadedProgram p;
    p.source = source;
    LogicalChecker logic(fuel);
    for (const Definition& d : p.source.defs) {
        TypingContext ctx;
        Sorted s = logic.sort_of(ctx, d.type);
        logic.check(ctx, d.body, s.term);
    }
    if (p.source.main) {
        const Definition& m = *p.source.main;
        if (!convertible(m.type, mk::c_type(mk::unit()), fuel))
            fail(ErrorCode::NotMainType, "main must have type C(unit), declared " + pretty(m.type), m.type.get());
        p.main = check_closed_main(m.body, fuel);
        p.config = singleton(p.main);
    } else {
        p.config = canonicalize(p.source.config());
        type_configuration(p.config, fuel);
    }
    return p;
}

LoadedProgram load_program(const std::string& text, std::size_t fuel) { return check_source(parse_source(text), fuel); }

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::StepBudgetExceeded:
    case ErrorCode::FuelExhausted:
        return 3;
    case ErrorCode::InternalInvariantViolation:
    case ErrorCode::FidelityViolation:
    case ErrorCode::ProgressViolation:
    case ErrorCode::SimulationGap:
    case ErrorCode::SimulationMismatch:
    case ErrorCode::TranscriptMismatch:
    case ErrorCode::HoleInspected:
        return 4;
    default:
        return 1;
    }
}

namespace {

constexpr int usage_error = 64;

int outcome_code(Outcome o) {
    switch (o) {
    case Outcome::Done: return 0;
    case Outcome::Deadlock: return 2;
    case Outcome::Budget: return 3;
    }
    return 4;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel, runtime and simulators for a dependent linear session calculus", "tllc"};
    app.require_subcommand(1);
    std::size_t fuel = default_fuel;
    app.add_option("--fuel", fuel, "Head-reduction budget for conversion checks")->capture_default_str();

    std::string file;
    std::uint64_t seed = 0;
    std::size_t max_steps = 10000;
    bool recheck = false;
    std::string trace_path;

    auto* check = app.add_subcommand("check", "Type-check main or a configuration");
    auto* run = app.add_subcommand("run", "Run under the seeded scheduler and print the trace");
    auto* erase_cmd = app.add_subcommand("erase", "Print the erased program");
    auto* simulate = app.add_subcommand("simulate", "Check that erasure commutes with evaluation");
    auto* tree = app.add_subcommand("tree-run", "Run the spawning-tree scheduler");
    auto* deadlock = app.add_subcommand("deadlock", "Run until termination or deadlock");
    for (auto* sub : {check, run, erase_cmd, simulate, tree, deadlock})
        sub->add_option("FILE", file, "Source file")->required();
    for (auto* sub : {run, simulate, tree, deadlock}) sub->add_option("--seed", seed, "Scheduler seed");
    for (auto* sub : {run, simulate, tree, deadlock})
        sub->add_option("--max-steps", max_steps, "Step budget")->capture_default_str();
    run->add_flag("--recheck", recheck, "Type the configuration after every step");
    run->add_option("--trace", trace_path, "Write the trace here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : usage_error;
    }

    std::ifstream in(file, std::ios::binary);
    if (!in) {
        err << "cannot read " << file << "\n";
        return usage_error;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    SourceFile source;
    LoadedProgram prog;
    try {
        source = parse_source(buf.str());
        prog = check_source(source, fuel);
    } catch (const KernelError& e) {
        err << format_diagnostic(e, source.spans) << "\n";
        return exit_code(e.code());
    }

    try {
        if (check->parsed()) {
            if (prog.main)
                out << "ok: main : C(unit)\n";
            else
                out << "ok: configuration with " << prog.config.procs.size() << " processes\n";
            return 0;
        }
        if (run->parsed()) {
            RunOptions opts{seed, max_steps, recheck, fuel};
            RunResult r = tllc::run(prog.config, opts);
            std::string trace = format_trace(r);
            if (trace_path.empty()) {
                out << trace;
            } else {
                std::ofstream t(trace_path, std::ios::binary);
                t << trace;
                if (!t) {
                    err << "cannot write " << trace_path << "\n";
                    return usage_error;
                }
            }
            return outcome_code(r.outcome);
        }
        if (erase_cmd->parsed()) {
            if (prog.main)
                out << pretty(erase(prog.main)) << "\n";
            else
                out << format_configuration(erase_config(prog.config));
            return 0;
        }
        if (simulate->parsed()) {
            if (prog.main) {
                TermLockstep t = lockstep_term(prog.main, max_steps);
                out << "term: " << t.steps << " steps commute with erasure\n";
            }
            ConfigLockstep c = lockstep_config(prog.config, seed, max_steps, fuel);
            out << "configuration: " << c.steps << " steps mirrored, " << c.transcript.size() << " real and "
                << c.ghost_steps << " ghost messages, result=" << to_string(c.outcome) << "\n";
            return 0;
        }
        if (tree->parsed()) {
            if (!prog.main) {
                err << "tree-run needs a file with main\n";
                return usage_error;
            }
            TreeRunOptions opts;
            opts.seed = seed;
            opts.max_steps = max_steps;
            opts.fuel = fuel;
            TreeRunResult r = tree_run(prog.main, opts);
            out << format_tree_trace(r);
            return outcome_code(r.outcome);
        }
        if (deadlock->parsed()) {
            RunOptions opts{seed, max_steps, false, fuel};
            RunResult r = tllc::run(prog.config, opts);
            out << "result=" << to_string(r.outcome) << " steps=" << r.steps.size() << "\n";
            if (r.outcome != Outcome::Done) out << format_configuration(r.final_config);
            return outcome_code(r.outcome);
        }
    } catch (const KernelError& e) {
        err << format_diagnostic(e, prog.source.spans) << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
    return usage_error;
}

}  // namespace tllc
