#pragma once
#include "vsim/program.hpp"

#include <stdexcept>
#include <string>

namespace vsim {

// Assembly diagnostics carry the 1-based source line, formatted as
// "<message>, line <n>" in what().
struct AsmError : std::runtime_error {
  int line;
  AsmError(const std::string& msg, int line_)
      : std::runtime_error(msg + ", line " + std::to_string(line_)),
        line(line_) {}
};

// Assembles VASM source text (grammar in docs/vasm.md) into a Program.
// Throws AsmError on the first problem found.
Program assemble(const std::string& source);

// Inverse of assemble: emits canonical VASM that re-assembles to an
// identical Program (labels are canonicalized, f64 data uses hex floats).
std::string disassemble(const Program& p);

} // namespace vsim
