#pragma once
// Functional reference model: executes a Program strictly in order with the
// architectural semantics and no timing. Every timed run must produce a
// bit-identical final state.

#include "vsim/exec.hpp"
#include "vsim/memory.hpp"
#include "vsim/program.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vsim {

struct StepLimitExceeded : SimTrap {
  using SimTrap::SimTrap;
};

struct ArchState {
  uint32_t mvl;
  uint32_t vl = 0;
  std::array<uint64_t, kNumXRegs> x{}; // x0 hardwired to zero
  std::array<uint64_t, kNumFRegs> f{}; // fp values as raw bits
  std::vector<std::vector<uint64_t>> v; // 32 registers x mvl words
  MemoryImage mem;
  uint64_t pc = 0;
  bool halted = false;

  explicit ArchState(uint32_t mvl_, MemoryImage mem_)
      : mvl(mvl_), v(kNumVRegs, std::vector<uint64_t>(mvl_, 0)),
        mem(std::move(mem_)) {
    x[1] = kHaltSentinel;           // ret from the entry frame halts
    x[2] = MemoryImage::kStackTop;  // stack pointer convention
  }
};

struct TraceEntry {
  uint64_t seq;
  InstClass cls;
  std::string mn;
  uint32_t vl; // VL at execution (0 for scalar instructions)
};

struct ExecCounters {
  uint64_t scalar_instructions = 0; // includes vsetvl
  uint64_t vector_memory = 0;
  uint64_t vector_arithmetic = 0;
  uint64_t vector_elem_manipulation = 0;
  uint64_t vector_operations = 0; // sum of VL over vector instructions
  uint64_t total_vector() const {
    return vector_memory + vector_arithmetic + vector_elem_manipulation;
  }
  uint64_t total() const { return scalar_instructions + total_vector(); }
};

class RefModel {
public:
  RefModel(Program p, uint32_t mvl);

  bool step();                         // one instruction; false once halted
  void run(uint64_t step_limit = 1'000'000'000ull);

  ArchState& state() { return st_; }
  const ArchState& state() const { return st_; }
  ExecCounters counters;
  bool collect_trace = false;
  std::vector<TraceEntry> trace;

private:
  void count(const Instruction& inst, uint32_t vl_at_exec);
  Program prog_;
  ArchState st_;
  uint64_t seq_ = 0;
};

} // namespace vsim
