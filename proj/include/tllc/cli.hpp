#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "tllc/parse.hpp"
#include "tllc/process.hpp"

namespace tllc {

// A checked source file: main elaborated, or a typed configuration.
struct LoadedProgram {
    SourceFile source;
    Term main;  // elaborated; null for configuration files
    Configuration config;
};

// Checks definitions against their types, then main or the configuration.
LoadedProgram check_source(const SourceFile& source, std::size_t fuel = default_fuel);

// Parses and checks. Throws KernelError (SourceError for syntax).
LoadedProgram load_program(const std::string& text, std::size_t fuel = default_fuel);

int exit_code(ErrorCode code);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tllc
