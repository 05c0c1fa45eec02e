#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <queue>
#include <vector>

#include "vsim/config.hpp"
#include "vsim/events.hpp"
#include "vsim/inst.hpp"
#include "vsim/memory.hpp"
#include "vsim/refmodel.hpp"
#include "vsim/vmu.hpp"

namespace vsim {

constexpr uint16_t kNoPhys = 0xffff;

// A vector instruction handed over by the scalar core at its issue, with all
// scalar operands captured by value.
struct Submission {
  Instruction inst;
  uint32_t vl = 0;
  uint64_t scalar_bits = 0;  // .vx/.vf operand, slide amount, vmv.s.x value
  uint64_t base = 0;         // memory base address
  int64_t stride = 0;        // element stride (signed)
};

// Result of a scalar-producing vector instruction (vfirst/vpopc/vmv.x.s),
// delivered back to the core: (rd, value, ready_tick).
using ScalarResultFn = std::function<void(uint8_t, uint64_t, uint64_t)>;

// Per-commit notification for statistics/tracing: (inst, vl).
using CommitFn = std::function<void(const Instruction&, uint32_t)>;

// The decoupled vector engine: renames vector destinations onto a physical
// register file (32 architectural mappings plus a free list), tracks program
// order in a reorder buffer, issues arithmetic through the lane array and
// memory through the VMU, and commits in order. Architectural effects happen
// at issue; the per-register valid bit holds consumers off until the modeled
// completion time.
class Engine {
 public:
  Engine(const EngineConfig& cfg, MemoryImage& mem, MemSystem& memsys,
         EventLog* log, TouchFn touch, ScalarResultFn on_scalar_result,
         CommitFn on_commit);

  // Scalar core pushes at its issue; false when the submission queue is full.
  bool submit(const Submission& s);

  void cycle(uint64_t vcycle);

  bool drained() const;

  // Architectural view of a vector register (physical register currently
  // mapped by the rename table).
  const std::vector<uint64_t>& vreg(uint8_t v) const;

  // committed vector instruction counts
  const ExecCounters& counters() const { return counters_; }

  // physical register conservation + valid-bit sanity; throws SimTrap
  void check_invariants() const;

  uint64_t committed() const { return committed_; }

 private:
  struct RobEntry {
    uint64_t seq = 0;
    Instruction inst;
    uint32_t vl = 0;
    uint64_t scalar_bits = 0;
    uint64_t base = 0;
    int64_t stride = 0;
    uint16_t prd = kNoPhys, pold = kNoPhys;
    uint16_t ps1 = kNoPhys, ps2 = kNoPhys, pmask = kNoPhys, pdata = kNoPhys;
    bool needs_old = false;
    bool issued = false;
    bool executed = false;
    bool is_mem = false;
    bool is_store = false;
    bool indexed = false;
    uint64_t lo = 1, hi = 0;  // closed byte interval; lo > hi means empty
    bool hazard = false;
    uint64_t scalar_result = 0;
    bool has_scalar_result = false;
  };

  const EngineConfig& cfg_;
  MemoryImage& mem_;
  EventLog* log_;
  ScalarResultFn on_scalar_result_;
  CommitFn on_commit_;
  Vmu vmu_;

  std::vector<std::vector<uint64_t>> prf_;
  std::vector<bool> valid_;
  std::array<uint16_t, kNumVRegs> rat_;
  std::deque<uint16_t> frl_;

  std::deque<Submission> subq_;
  std::deque<RobEntry> rob_;
  std::deque<uint64_t> arith_q_;  // seqs, program order
  std::deque<uint64_t> mem_q_;
  uint64_t next_seq_ = 0;
  uint64_t lanes_free_cycle_ = 0;

  // (completion cycle, seq), earliest first
  using Comp = std::pair<uint64_t, uint64_t>;
  std::priority_queue<Comp, std::vector<Comp>, std::greater<Comp>> comps_;

  ExecCounters counters_;
  uint64_t committed_ = 0;
  std::vector<uint64_t> vmu_completed_;   // scratch
  std::vector<uint64_t> scratch_;         // dest buffer for scalar-result ops

  RobEntry* find(uint64_t seq);
  void mark_executed(RobEntry& e, uint64_t vcycle);
  void recompute_hazards();
  bool hazard_for(const RobEntry& e) const;
  bool sources_ready(const RobEntry& e) const;
  void do_rename(uint64_t vcycle);
  void do_issue_arith(uint64_t vcycle);
  void do_issue_mem(uint64_t vcycle);
  void do_commit(uint64_t vcycle);
  void execute_arith(RobEntry& e, uint64_t vcycle);
  void dispatch_mem(RobEntry& e, uint64_t vcycle);
};

}  // namespace vsim
