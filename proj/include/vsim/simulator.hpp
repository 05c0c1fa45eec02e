#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsim/config.hpp"
#include "vsim/events.hpp"
#include "vsim/memory.hpp"
#include "vsim/memsys.hpp"
#include "vsim/program.hpp"
#include "vsim/refmodel.hpp"

namespace vsim {

// Merged byte-interval set for the scalar/vector memory ownership check.
class IntervalSet {
 public:
  void add(uint64_t lo, uint64_t hi);  // closed interval
  bool intersects(uint64_t lo, uint64_t hi) const;
  bool empty() const { return m_.empty(); }

 private:
  std::map<uint64_t, uint64_t> m_;  // lo -> hi, disjoint, gap-separated
};

// Scalar code and vector code must not touch overlapping bytes unless both
// sides only read. Violations throw SimTrap at the offending access.
class Discipline {
 public:
  explicit Discipline(bool enabled) : enabled_(enabled) {}
  void scalar_access(uint64_t addr, uint32_t len, bool write);
  void vector_access(uint64_t addr, uint32_t len, bool write);

 private:
  bool enabled_;
  IntervalSet scalar_reads_, scalar_writes_, vector_reads_, vector_writes_;
};

struct SimOptions {
  bool events = false;
  bool trace = false;
};

struct SimResult {
  ExecCounters counters;  // scalar at core issue, vector at engine commit
  uint64_t ticks = 0;
  uint64_t vector_cycles = 0;
  CacheStats cache;
  std::array<uint64_t, 32> x{};
  std::array<uint64_t, 32> f{};
  std::vector<std::vector<uint64_t>> vregs;  // 32 x mvl, logical view
  uint32_t final_vl = 0;
  MemoryImage memory;
  EventLog events;
  std::vector<TraceEntry> trace;  // committed vector instructions
};

SimResult run_timed(const Program& prog, const EngineConfig& cfg,
                    const SimOptions& opt = {});

// Functional reference run with the same counters/final-state shape.
SimResult run_reference(const Program& prog, const EngineConfig& cfg,
                        const SimOptions& opt = {});

// Differences between a timed run and the reference model's architectural
// state; empty means the timed pipeline preserved the functional semantics.
std::vector<std::string> compare_results(const SimResult& timed,
                                         const SimResult& reference);

}  // namespace vsim
